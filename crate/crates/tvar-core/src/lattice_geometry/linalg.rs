//! Dense exact linear algebra over the rationals, sized for rank <= 5.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::rational::Rational;

pub type QVec = Vec<Rational>;

pub fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| Rational::from(x)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn dot_zq(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(&x, &y)| Rational::from(x) * y).sum()
}

pub fn dot_zz(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn scale(c: Rational, a: &[Rational]) -> QVec {
    a.iter().map(|&x| c * x).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = scale(inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let row_r = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row_r) {
                    *x -= f * *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows * x = 0}`, one vector per free column, in column order.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::ZERO; ncols];
        v[free] = Rational::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free];
        }
        basis.push(v);
    }
    basis
}

/// Solves `a * x = b` for `x` given as column vectors of `a`, returning one solution
/// with all free variables set to zero.
pub fn solve_columns(cols: &[QVec], b: &[Rational]) -> Option<QVec> {
    let nrows = b.len();
    let ncols = cols.len();
    let aug: Vec<QVec> = (0..nrows)
        .map(|i| {
            let mut row: QVec = cols.iter().map(|c| c[i]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rational::ZERO; ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols];
    }
    Some(x)
}

fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive_ray(v: &[Rational]) -> Option<Vec<i64>> {
    if is_zero(v) {
        return None;
    }
    let l = v.iter().fold(1i128, |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| x.numer() * (l / x.denom())).collect();
    let g = gcd_all(&ints);
    Some(
        ints.iter()
            .map(|&x| i64::try_from(x / g).expect("lattice coordinate exceeds i64"))
            .collect(),
    )
}

/// Least positive integer `d` with `d * v` integral.
pub fn denominator_lcm(v: &[Rational]) -> i64 {
    let l = v.iter().fold(1i128, |acc, x| acc.lcm(&x.denom()));
    i64::try_from(l).expect("denominator exceeds i64")
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
