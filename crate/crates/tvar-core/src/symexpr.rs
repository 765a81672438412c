//! The factored Laurent-character ring `Q(t)[M]`.
//!
//! A [`SymExpr`] maps each weight `m` to a rational function of `t`. Rational functions
//! are stored as an expanded numerator over a product of powers `(t - z)^b`, and are
//! normalized by cancelling every denominator factor that divides the numerator. With
//! that normalization structural equality is equality of functions, so the zero test is
//! an emptiness check.
//!
//! Text form: terms `c * t^k * (t-z)^a * X^[m1,m2]` joined by ` + ` / ` - `, with the
//! character factor always present. Printing and parsing round-trip.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::str::FromStr;

use crate::rational::Rational;

/// Dense polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::ONE)
    }

    /// `t - z`
    pub fn linear(z: Rational) -> Poly {
        Poly::from_coeffs(vec![-z, Rational::ONE])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Poly {
        let mut v = vec![Rational::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<Rational>) -> Poly {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Poly(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).copied().unwrap_or(Rational::ZERO)
    }

    pub fn eval(&self, x: Rational) -> Rational {
        self.0.iter().rev().fold(Rational::ZERO, |acc, &c| acc * x + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-Rational::ONE))
    }

    pub fn scale(&self, c: Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|&x| x * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::ZERO; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.0.iter().enumerate().skip(1).map(|(k, &c)| c * Rational::from(k as i64)).collect(),
        )
    }

    /// `p(t + c)`.
    pub fn shift(&self, c: Rational) -> Poly {
        let lin = Poly::from_coeffs(vec![c, Rational::ONE]);
        self.0.iter().rev().fold(Poly::zero(), |acc, &a| acc.mul(&lin).add(&Poly::constant(a)))
    }

    /// Exact quotient by `t - z`, or `None` when `z` is not a root.
    pub fn div_linear(&self, z: Rational) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let n = self.0.len();
        let mut q = vec![Rational::ZERO; n - 1];
        let mut carry = Rational::ZERO;
        for k in (0..n).rev() {
            let c = self.0[k] + carry * z;
            if k == 0 {
                return c.is_zero().then(|| Poly::from_coeffs(q));
            }
            q[k - 1] = c;
            carry = c;
        }
        unreachable!()
    }

    /// Multiplicity of `z` as a root (0 for the zero polynomial).
    pub fn root_multiplicity(&self, z: Rational) -> u32 {
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            match p.div_linear(z) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.0)
    }
}

/// `num / prod (t - z)^b` with every `b > 0` and `num(z) != 0` for each listed `z`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: BTreeMap<Rational, u32>,
}

impl RatFun {
    pub fn zero() -> RatFun {
        RatFun::default()
    }

    pub fn one() -> RatFun {
        RatFun::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> RatFun {
        RatFun { num: Poly::constant(c), den: BTreeMap::new() }
    }

    pub fn poly(p: Poly) -> RatFun {
        RatFun { num: p, den: BTreeMap::new() }
    }

    pub fn t() -> RatFun {
        RatFun::poly(Poly::monomial(Rational::ONE, 1))
    }

    /// `(t - z)^a` for any integer `a`.
    pub fn linear_power(z: Rational, a: i64) -> RatFun {
        if a >= 0 {
            RatFun::poly(Poly::linear(z).pow(a as u32))
        } else {
            let mut den = BTreeMap::new();
            den.insert(z, (-a) as u32);
            RatFun { num: Poly::one(), den }
        }
    }

    /// Builds `num / prod (t-z)^b` and normalizes.
    pub fn new(num: Poly, den: BTreeMap<Rational, u32>) -> RatFun {
        let mut r = RatFun { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<Rational> = self.den.keys().copied().collect();
        for z in keys {
            let b = self.den.get_mut(&z).unwrap();
            while *b > 0 {
                match self.num.div_linear(z) {
                    Some(q) => {
                        self.num = q;
                        *b -= 1;
                    }
                    None => break,
                }
            }
            if *b == 0 {
                self.den.remove(&z);
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Rational, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_empty() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    fn den_poly(den: &BTreeMap<Rational, u32>) -> Poly {
        den.iter().fold(Poly::one(), |acc, (&z, &b)| acc.mul(&Poly::linear(z).pow(b)))
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (&z, &b) in &o.den {
            let e = den.entry(z).or_insert(0);
            *e = (*e).max(b);
        }
        let lift = |r: &RatFun| {
            let extra: BTreeMap<Rational, u32> = den
                .iter()
                .map(|(&z, &b)| (z, b - r.den.get(&z).copied().unwrap_or(0)))
                .collect();
            r.num.mul(&RatFun::den_poly(&extra))
        };
        RatFun::new(lift(self).add(&lift(o)), den)
    }

    pub fn neg(&self) -> RatFun {
        self.scale(-Rational::ONE)
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Rational) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        let mut den = self.den.clone();
        for (&z, &b) in &o.den {
            *den.entry(z).or_insert(0) += b;
        }
        RatFun::new(self.num.mul(&o.num), den)
    }

    pub fn pow(&self, k: u32) -> RatFun {
        (0..k).fold(RatFun::one(), |acc, _| acc.mul(self))
    }

    /// `d/dt`.
    pub fn derivative(&self) -> RatFun {
        if self.den.is_empty() {
            return RatFun::poly(self.num.derivative());
        }
        // (N Q^{-1})' with Q = prod (t-z)^b, over the denominator prod (t-z)^{b+1}.
        let all = Poly::from_coeffs(vec![Rational::ONE]);
        let lin_prod = self.den.keys().fold(all, |acc, &z| acc.mul(&Poly::linear(z)));
        let mut num = self.num.derivative().mul(&lin_prod);
        for (&z, &b) in &self.den {
            let others = self
                .den
                .keys()
                .filter(|&&w| w != z)
                .fold(Poly::one(), |acc, &w| acc.mul(&Poly::linear(w)));
            num = num.sub(&self.num.mul(&others).scale(Rational::from(b as i64)));
        }
        let den = self.den.iter().map(|(&z, &b)| (z, b + 1)).collect();
        RatFun::new(num, den)
    }

    /// `f(t + c)`.
    pub fn shift(&self, c: Rational) -> RatFun {
        let den = self.den.iter().map(|(&z, &b)| (z - c, b)).collect();
        RatFun::new(self.num.shift(c), den)
    }

    /// Order of vanishing at `z` (negative for a pole). `None` for the zero function.
    pub fn order_at(&self, z: Rational) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match self.den.get(&z) {
            Some(&b) => Some(-(b as i64)),
            None => Some(self.num.root_multiplicity(z) as i64),
        }
    }

    /// Points where the function has a pole.
    pub fn poles(&self) -> impl Iterator<Item = Rational> + '_ {
        self.den.keys().copied()
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: Rational) -> Option<Rational> {
        let mut d = Rational::ONE;
        for (&z, &b) in &self.den {
            let f = x - z;
            if f.is_zero() {
                return None;
            }
            d *= f.pow(b);
        }
        Some(self.num.eval(x) / d)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} / {:?})", self.num, self.den)
    }
}

/// One printed term `c * prod (t-z)^{a_z} * X^m`; `z = 0` carries the power of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTerm {
    pub coeff: Rational,
    pub factors: BTreeMap<Rational, i64>,
    pub weight: Vec<i64>,
}

/// Finite sum of rational functions times characters, grouped by weight.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SymExpr {
    parts: BTreeMap<Vec<i64>, RatFun>,
}

impl SymExpr {
    pub fn zero() -> SymExpr {
        SymExpr::default()
    }

    /// `f * X^m`
    pub fn homogeneous(f: RatFun, m: Vec<i64>) -> SymExpr {
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(m, f);
        }
        SymExpr { parts }
    }

    /// A weight-zero function of `t`; `rank` is the lattice rank.
    pub fn function(f: RatFun, rank: usize) -> SymExpr {
        SymExpr::homogeneous(f, vec![0; rank])
    }

    pub fn constant(c: Rational, rank: usize) -> SymExpr {
        SymExpr::function(RatFun::constant(c), rank)
    }

    pub fn t(rank: usize) -> SymExpr {
        SymExpr::function(RatFun::t(), rank)
    }

    pub fn chi(m: Vec<i64>) -> SymExpr {
        SymExpr::homogeneous(RatFun::one(), m)
    }

    pub fn from_term(term: &SymTerm) -> SymExpr {
        let f = term
            .factors
            .iter()
            .fold(RatFun::constant(term.coeff), |acc, (&z, &a)| acc.mul(&RatFun::linear_power(z, a)));
        SymExpr::homogeneous(f, term.weight.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &BTreeMap<Vec<i64>, RatFun> {
        &self.parts
    }

    /// Weight and coefficient when the expression has a single weight.
    pub fn as_homogeneous(&self) -> Option<(&Vec<i64>, &RatFun)> {
        if self.parts.len() == 1 {
            self.parts.iter().next()
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &[i64]) -> RatFun {
        self.parts.get(m).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &SymExpr) -> SymExpr {
        let mut parts = self.parts.clone();
        for (m, f) in &o.parts {
            let s = parts.get(m).map(|g| g.add(f)).unwrap_or_else(|| f.clone());
            if s.is_zero() {
                parts.remove(m);
            } else {
                parts.insert(m.clone(), s);
            }
        }
        SymExpr { parts }
    }

    pub fn neg(&self) -> SymExpr {
        self.scale(-Rational::ONE)
    }

    pub fn sub(&self, o: &SymExpr) -> SymExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Rational) -> SymExpr {
        self.mul_fn(&RatFun::constant(c))
    }

    /// Multiplies every coefficient by the weight-zero function `f`.
    pub fn mul_fn(&self, f: &RatFun) -> SymExpr {
        let parts = self
            .parts
            .iter()
            .map(|(m, g)| (m.clone(), g.mul(f)))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        SymExpr { parts }
    }

    pub fn mul(&self, o: &SymExpr) -> SymExpr {
        let mut acc = SymExpr::zero();
        for (m1, f1) in &self.parts {
            for (m2, f2) in &o.parts {
                let m: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                acc = acc.add(&SymExpr::homogeneous(f1.mul(f2), m));
            }
        }
        acc
    }

    pub fn pow(&self, k: u32, rank: usize) -> SymExpr {
        (0..k).fold(SymExpr::constant(Rational::ONE, rank), |acc, _| acc.mul(self))
    }

    /// Shifts every weight by `e`.
    pub fn shift_weight(&self, e: &[i64]) -> SymExpr {
        let parts = self
            .parts
            .iter()
            .map(|(m, f)| (m.iter().zip(e).map(|(a, b)| a + b).collect(), f.clone()))
            .collect();
        SymExpr { parts }
    }

    /// Applies `g(t) -> g(t + c)` to every coefficient.
    pub fn shift_t(&self, c: Rational) -> SymExpr {
        SymExpr { parts: self.parts.iter().map(|(m, f)| (m.clone(), f.shift(c))).collect() }
    }

    /// Expanded terms in print order.
    pub fn terms(&self) -> Vec<SymTerm> {
        let mut out = Vec::new();
        for (m, f) in &self.parts {
            let t_den = f.den.get(&Rational::ZERO).copied().unwrap_or(0) as i64;
            for (k, &c) in f.num.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut factors = BTreeMap::new();
                let tp = k as i64 - t_den;
                if tp != 0 {
                    factors.insert(Rational::ZERO, tp);
                }
                for (&z, &b) in &f.den {
                    if !z.is_zero() {
                        factors.insert(z, -(b as i64));
                    }
                }
                out.push(SymTerm { coeff: c, factors, weight: m.clone() });
            }
        }
        out
    }
}

impl fmt::Debug for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_power(out: &mut String, base: &str, a: i64) {
    out.push_str(base);
    if a != 1 {
        let _ = write!(out, "^{}", a);
    }
}

fn render_terms(terms: &[SymTerm], with_weight: bool) -> String {
    if terms.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, term) in terms.iter().enumerate() {
        if i == 0 {
            if term.coeff.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if term.coeff.is_negative() { " - " } else { " + " });
        }
        let mut pieces: Vec<String> = Vec::new();
        let mag = term.coeff.abs();
        if mag != Rational::ONE {
            pieces.push(alloc::format!("{}", mag));
        }
        for (&z, &a) in &term.factors {
            let mut s = String::new();
            if z.is_zero() {
                write_power(&mut s, "t", a);
            } else if z.is_negative() {
                write_power(&mut s, &alloc::format!("(t+{})", -z), a);
            } else {
                write_power(&mut s, &alloc::format!("(t-{})", z), a);
            }
            pieces.push(s);
        }
        if with_weight {
            let ws: Vec<String> = term.weight.iter().map(|x| alloc::format!("{}", x)).collect();
            pieces.push(alloc::format!("X^[{}]", ws.join(",")));
        } else if pieces.is_empty() {
            pieces.push(String::from("1"));
        }
        out.push_str(&pieces.join(" * "));
    }
    out
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.terms(), true))
    }
}

/// Same term layout as [`SymExpr`], without the character; parses back with rank `0`.
impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&SymExpr::homogeneous(self.clone(), Vec::new()).terms(), false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse expression at byte {pos}: {msg}")]
pub struct ParseExprError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ParseExprError> {
        Err(ParseExprError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&alloc::format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<i128, ParseExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected integer")
            }
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseExprError> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.integer()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::int(n))
    }

    fn exponent(&mut self) -> Result<i64, ParseExprError> {
        if self.eat(b'^') {
            let e = self.integer()?;
            i64::try_from(e).or_else(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    /// Parses one product; returns its coefficient function and optional weight.
    fn term(&mut self) -> Result<(RatFun, Option<Vec<i64>>), ParseExprError> {
        let mut f = RatFun::one();
        let mut weight = None;
        loop {
            match self.peek() {
                Some(b't') => {
                    self.pos += 1;
                    let a = self.exponent()?;
                    f = f.mul(&RatFun::linear_power(Rational::ZERO, a));
                }
                Some(b'(') => {
                    self.pos += 1;
                    self.expect(b't')?;
                    let sign = match self.peek() {
                        Some(b'-') => Rational::ONE,
                        Some(b'+') => -Rational::ONE,
                        _ => return self.err("expected '+' or '-' after 't'"),
                    };
                    self.pos += 1;
                    let z = self.rational()? * sign;
                    self.expect(b')')?;
                    let a = self.exponent()?;
                    f = f.mul(&RatFun::linear_power(z, a));
                }
                Some(b'X') => {
                    self.pos += 1;
                    self.expect(b'^')?;
                    self.expect(b'[')?;
                    let mut m = Vec::new();
                    if !self.eat(b']') {
                        loop {
                            let x = self.integer()?;
                            m.push(i64::try_from(x).or_else(|_| self.err("weight out of range"))?);
                            if self.eat(b']') {
                                break;
                            }
                            self.expect(b',')?;
                        }
                    }
                    if weight.replace(m).is_some() {
                        return self.err("two character factors in one term");
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let c = self.rational()?;
                    f = f.scale(c);
                }
                _ => return self.err("expected factor"),
            }
            if !self.eat(b'*') {
                return Ok((f, weight));
            }
        }
    }
}

impl SymExpr {
    /// Parses the text form. Terms without a character factor get weight `0` of the
    /// given rank.
    pub fn parse(s: &str, rank: usize) -> Result<SymExpr, ParseExprError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let mut acc = SymExpr::zero();
        let mut sign = Rational::ONE;
        if p.eat(b'-') {
            sign = -Rational::ONE;
        }
        loop {
            let (f, w) = p.term()?;
            let w = w.unwrap_or_else(|| vec![0; rank]);
            if w.len() != rank {
                return p.err("weight has wrong rank");
            }
            acc = acc.add(&SymExpr::homogeneous(f.scale(sign), w));
            match p.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = Rational::ONE,
                Some(b'-') => sign = -Rational::ONE,
                _ => return p.err("expected '+' or '-'"),
            }
            p.pos += 1;
        }
    }
}

impl FromStr for RatFun {
    type Err = ParseExprError;

    /// A weight-free expression such as `t^2 * (t-1)^-1 - 3`.
    fn from_str(s: &str) -> Result<RatFun, ParseExprError> {
        Ok(SymExpr::parse(s, 0)?.coefficient(&[]))
    }
}

impl FromStr for SymExpr {
    type Err = ParseExprError;

    /// Parses with the rank read off the first character factor (rank 0 if none).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rank = s
            .find("X^[")
            .map(|i| {
                let rest = &s[i + 3..];
                let inner = &rest[..rest.find(']').unwrap_or(rest.len())];
                if inner.trim().is_empty() {
                    0
                } else {
                    inner.split(',').count()
                }
            })
            .unwrap_or(0);
        SymExpr::parse(s, rank)
    }
}
