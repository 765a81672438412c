//! Linear constraint systems over the rationals, decided by Fourier–Motzkin elimination.

use alloc::vec::Vec;
use core::fmt;

use super::linalg::QVec;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// `coeffs . x  rel  rhs`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub coeffs: QVec,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: QVec, rel: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading coefficient,
    /// flipping the relation when the sign changes.
    pub fn normalized(&self) -> Constraint {
        let mut all: QVec = self.coeffs.clone();
        all.push(self.rhs);
        let l = all.iter().fold(1i128, |acc, x| num_integer::Integer::lcm(&acc, &x.denom()));
        let ints: Vec<i128> = all.iter().map(|x| x.numer() * (l / x.denom())).collect();
        let g = ints.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x)).max(1);
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.signum()).unwrap_or(1);
        let f = if lead < 0 { -g } else { g };
        let mut coeffs: QVec = ints.iter().map(|&x| Rational::int(x / f)).collect();
        let rhs = coeffs.pop().unwrap();
        let rel = match (self.rel, lead < 0) {
            (Relation::Ge, true) => Relation::Le,
            (Relation::Le, true) => Relation::Ge,
            (r, _) => r,
        };
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(&a, &b)| a * b).sum();
        match self.rel {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Renders with the given variable names, e.g. `a + 4b <= -4`.
    pub fn render(&self, names: &[&str]) -> alloc::string::String {
        use alloc::string::String;
        use core::fmt::Write;
        let mut s = String::new();
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if mag != Rational::ONE {
                let _ = write!(s, "{}", mag);
            }
            s.push_str(name);
        }
        if s.is_empty() {
            s.push('0');
        }
        let _ = write!(s, " {} {}", self.rel.symbol(), self.rhs);
        s
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<alloc::string::String> =
            (0..self.coeffs.len()).map(|i| alloc::format!("x{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        f.write_str(&self.render(&refs))
    }
}

#[derive(Clone, Debug)]
struct Row {
    a: QVec,
    b: Rational,
    strict: bool,
}

/// Feasibility over the rationals of rows `a.x >= b` (or `>` when strict) and equalities.
fn feasible_rows(mut ineq: Vec<Row>, mut eqs: Vec<(QVec, Rational)>, nvars: usize) -> bool {
    // Substitute equalities away.
    while let Some((a, b)) = eqs.pop() {
        let Some(j) = (0..nvars).find(|&j| !a[j].is_zero()) else {
            if !b.is_zero() {
                return false;
            }
            continue;
        };
        let piv = a[j];
        let subst = |v: &mut QVec, rhs: &mut Rational| {
            let f = v[j] / piv;
            if f.is_zero() {
                return;
            }
            for k in 0..nvars {
                v[k] -= f * a[k];
            }
            *rhs -= f * b;
        };
        for (v, rhs) in eqs.iter_mut() {
            subst(v, rhs);
        }
        for r in ineq.iter_mut() {
            subst(&mut r.a, &mut r.b);
        }
    }
    for j in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in ineq {
            match r.a[j].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => rest.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let fp = p.a[j].recip();
                let fnn = (-n.a[j]).recip();
                let a: QVec = p.a.iter().zip(&n.a).map(|(&x, &y)| fp * x + fnn * y).collect();
                let row = Row { a, b: fp * p.b + fnn * n.b, strict: p.strict || n.strict };
                if !rest.iter().any(|r: &Row| r.a == row.a && r.b == row.b && r.strict == row.strict) {
                    rest.push(row);
                }
            }
        }
        ineq = rest;
    }
    ineq.iter().all(|r| if r.strict { r.b < Rational::ZERO } else { r.b <= Rational::ZERO })
}

fn split(cs: &[Constraint]) -> (Vec<Row>, Vec<(QVec, Rational)>) {
    let mut ineq = Vec::new();
    let mut eqs = Vec::new();
    for c in cs {
        match c.rel {
            Relation::Ge => ineq.push(Row { a: c.coeffs.clone(), b: c.rhs, strict: false }),
            Relation::Le => ineq.push(Row {
                a: c.coeffs.iter().map(|&x| -x).collect(),
                b: -c.rhs,
                strict: false,
            }),
            Relation::Eq => eqs.push((c.coeffs.clone(), c.rhs)),
        }
    }
    (ineq, eqs)
}

pub fn feasible(cs: &[Constraint], nvars: usize) -> bool {
    let (ineq, eqs) = split(cs);
    feasible_rows(ineq, eqs, nvars)
}

/// True when every rational point satisfying `cs` also satisfies `c`.
pub fn implies(cs: &[Constraint], c: &Constraint, nvars: usize) -> bool {
    let (ineq, eqs) = split(cs);
    let neg = |a: &QVec| a.iter().map(|&x| -x).collect::<QVec>();
    // A violation of `c` is `c.a x < rhs` or `c.a x > rhs`.
    let lt = Row { a: neg(&c.coeffs), b: -c.rhs, strict: true };
    let gt = Row { a: c.coeffs.clone(), b: c.rhs, strict: true };
    let witnesses: Vec<Row> = match c.rel {
        Relation::Ge => alloc::vec![lt],
        Relation::Le => alloc::vec![gt],
        Relation::Eq => alloc::vec![lt, gt],
    };
    witnesses.into_iter().all(|w| {
        let mut rows = ineq.clone();
        rows.push(w);
        !feasible_rows(rows, eqs.clone(), nvars)
    })
}

/// Normalizes, deduplicates and drops constraints implied by the remaining ones.
/// Equalities are kept; inequalities are tested last-to-first.
pub fn reduce(cs: &[Constraint], nvars: usize) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::new();
    for c in cs.iter().map(|c| c.normalized()) {
        if c.coeffs.iter().all(|x| x.is_zero()) {
            continue;
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    let mut i = out.len();
    while i > 0 {
        i -= 1;
        if out[i].rel == Relation::Eq {
            continue;
        }
        let others: Vec<Constraint> =
            out.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, c)| c.clone()).collect();
        if implies(&others, &out[i], nvars) {
            out.remove(i);
        }
    }
    out
}
