//! Sparse polynomials over the rationals in two alphabets `x_1..x_n`, `y_1..y_n`.
//!
//! Monomials are exponent vectors of length `2n` with the x-block first. Terms
//! are kept in a `BTreeMap` under the graded-lexicographic order on that
//! concatenated vector, so iteration order (and every printed form) is
//! reproducible. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    X,
    Y,
}

impl Alphabet {
    pub fn other(self) -> Alphabet {
        match self {
            Alphabet::X => Alphabet::Y,
            Alphabet::Y => Alphabet::X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub dx: usize,
    pub dy: usize,
}

impl Bidegree {
    pub const fn new(dx: usize, dy: usize) -> Self {
        Bidegree { dx, dy }
    }

    pub fn total(&self) -> usize {
        self.dx + self.dy
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; 2 * n] }
    }

    pub fn from_parts(x: &[u8], y: &[u8]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Arity { left: x.len(), right: y.len() });
        }
        let mut exps = x.to_vec();
        exps.extend_from_slice(y);
        Ok(Monomial { exps })
    }

    pub(crate) fn from_exps(exps: Vec<u8>) -> Self {
        debug_assert!(exps.len().is_multiple_of(2));
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn x(&self) -> &[u8] {
        &self.exps[..self.nvars()]
    }

    pub fn y(&self) -> &[u8] {
        &self.exps[self.nvars()..]
    }

    pub fn alphabet(&self, a: Alphabet) -> &[u8] {
        match a {
            Alphabet::X => self.x(),
            Alphabet::Y => self.y(),
        }
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn bidegree(&self) -> Bidegree {
        let s = |v: &[u8]| v.iter().map(|&e| e as usize).sum();
        Bidegree::new(s(self.x()), s(self.y()))
    }

    /// Product of `a_i!` over all exponents: the apolar norm of the monomial.
    pub fn factorial_weight(&self) -> BigInt {
        self.exps
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>())
            .fold(BigInt::one(), |acc, f| acc * BigInt::from(f))
    }

    fn slot(n: usize, a: Alphabet, i: usize) -> usize {
        match a {
            Alphabet::X => i,
            Alphabet::Y => n + i,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `e (e-1) ... (e-k+1)`; zero when `k > e`.
pub fn falling(e: u64, k: u64) -> u64 {
    if k > e {
        return 0;
    }
    ((e - k + 1)..=e).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { nvars: n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The variable `x_{i+1}` or `y_{i+1}` (0-based `i`).
    pub fn var(n: usize, a: Alphabet, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for {n} variables");
        let mut m = Monomial::one(n);
        m.exps[Monomial::slot(n, a, i)] = 1;
        Self::term(m, Rational::one())
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::var(n, Alphabet::X, i)
    }

    pub fn y(n: usize, i: usize) -> Self {
        Self::var(n, Alphabet::Y, i)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            if m.nvars() != n {
                return Err(Error::Arity { left: n, right: m.nvars() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Arity { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// `self += c * other`, arity assumed equal.
    pub(crate) fn axpy(&mut self, c: &Rational, other: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.axpy(&Rational::one(), other);
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.axpy(&-Rational::one(), other);
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps = ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect();
                out.add_term(Monomial::from_exps(exps), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::one(self.nvars), |acc, _| {
            acc.mul(self).expect("same arity")
        })
    }

    pub fn derivative(&self, a: Alphabet, i: usize) -> Polynomial {
        let slot = Monomial::slot(self.nvars, a, i);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[slot] -= 1;
            out.terms.insert(Monomial::from_exps(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// `self(∂) q`: every `x_i` in `self` acts as `∂/∂x_i`, every `y_i` as `∂/∂y_i`.
    pub fn apply_to(&self, q: &Polynomial) -> Result<Polynomial> {
        apply_operator(self, q)
    }

    /// The bihomogeneous bidegree, or `None` for zero and mixed polynomials.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.bidegree().is_some()
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.y().iter().all(|&e| e == 0))
    }

    pub fn bihomogeneous_components(&self) -> BTreeMap<Bidegree, Polynomial> {
        let mut out: BTreeMap<Bidegree, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree())
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Writes `self = Σ_β y^β c_β(X)` and returns the map `β -> c_β`.
    pub fn y_layers(&self) -> BTreeMap<Vec<u8>, Polynomial> {
        let n = self.nvars;
        let mut out: BTreeMap<Vec<u8>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let beta = m.y().to_vec();
            let mut exps = m.x().to_vec();
            exps.extend(std::iter::repeat_n(0, n));
            out.entry(beta)
                .or_insert_with(|| Polynomial::zero(n))
                .terms
                .insert(Monomial::from_exps(exps), c.clone());
        }
        out
    }

    /// Evaluates at `(a_1..a_n, b_1..b_n)`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != 2 * self.nvars {
            return Err(Error::Arity { left: self.nvars, right: point.len() / 2 });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (e, x) in m.exps.iter().zip(point) {
                if *e > 0 {
                    v *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Views the polynomial in `n2 >= n` variables (the new ones unused).
    pub fn embed(&self, n2: usize) -> Result<Polynomial> {
        if n2 < self.nvars {
            return Err(Error::Arity { left: self.nvars, right: n2 });
        }
        let n = self.nvars;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u8; 2 * n2];
            exps[..n].copy_from_slice(m.x());
            exps[n2..n2 + n].copy_from_slice(m.y());
            (Monomial::from_exps(exps), c.clone())
        });
        Ok(Polynomial { nvars: n2, terms: terms.collect() })
    }

    /// Relabels variables: `x_i -> x_{perm[i]}`, `y_i -> y_{perm[i]}`.
    pub fn permute_variables(&self, perm: &[usize]) -> Polynomial {
        let n = self.nvars;
        assert_eq!(perm.len(), n);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u8; 2 * n];
            for i in 0..n {
                exps[perm[i]] = m.exps[i];
                exps[n + perm[i]] = m.exps[n + i];
            }
            (Monomial::from_exps(exps), c.clone())
        });
        Polynomial { nvars: n, terms: terms.collect() }
    }

    /// Exchanges the roles of the two alphabets.
    pub fn swap_alphabets(&self) -> Polynomial {
        let n = self.nvars;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = m.y().to_vec();
            exps.extend_from_slice(m.x());
            (Monomial::from_exps(exps), c.clone())
        });
        Polynomial { nvars: n, terms: terms.collect() }
    }

    /// Multiplies every coefficient so the leading one becomes 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

/// `p(∂) q`.
pub fn apply_operator(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.check_arity(q)?;
    let mut out = Polynomial::zero(q.nvars);
    for (alpha, a) in &p.terms {
        apply_monomial_into(alpha, a, q, &mut out);
    }
    Ok(out)
}

pub(crate) fn apply_monomial_into(alpha: &Monomial, a: &Rational, q: &Polynomial, out: &mut Polynomial) {
    'terms: for (beta, b) in &q.terms {
        let mut factor: u64 = 1;
        let mut exps = Vec::with_capacity(beta.exps.len());
        for (&e, &k) in beta.exps.iter().zip(&alpha.exps) {
            if k > e {
                continue 'terms;
            }
            factor *= falling(e as u64, k as u64);
            exps.push(e - k);
        }
        out.add_term(
            Monomial::from_exps(exps),
            a * b * Rational::from_integer(BigInt::from(factor)),
        );
    }
}

/// `(p, q)`: the constant term of `p(∂) q`.
pub fn apolar_pairing(p: &Polynomial, q: &Polynomial) -> Result<Rational> {
    p.check_arity(q)?;
    let mut total = Rational::zero();
    for (m, a) in &p.terms {
        if let Some(b) = q.terms.get(m) {
            total += a * b * Rational::from_integer(m.factorial_weight());
        }
    }
    Ok(total)
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Terms from the leading monomial down, e.g. `-x1 + x2` or `3/2*x1^2*y2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.nvars;
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (slot, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if slot < n {
                    format!("x{}", slot + 1)
                } else {
                    format!("y{}", slot - n + 1)
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            if factors.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Parses the text form produced by `Display` in `n` variables.
    pub fn parse(s: &str, n: usize) -> Result<Polynomial> {
        let bad = |msg: String| Error::Parse(msg);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty polynomial".into()));
        }
        let mut p = Polynomial::zero(n);
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.is_empty() {
                neg ^= ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad(format!("dangling sign in {s:?}")));
        }
        terms.push((neg, cur));
        for (neg, body) in terms {
            let mut coeff = Rational::one();
            let mut exps = vec![0u8; 2 * n];
            for factor in body.split('*') {
                let (base, e) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<u8>().map_err(|_| bad(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let (letter, idx) = base.split_at(1.min(base.len()));
                match letter {
                    "x" | "y" => {
                        let i: usize = idx
                            .parse()
                            .map_err(|_| bad(format!("bad variable {base:?}")))?;
                        if i == 0 || i > n {
                            return Err(bad(format!("variable {base} outside 1..={n}")));
                        }
                        let slot = if letter == "x" { i - 1 } else { n + i - 1 };
                        exps[slot] += e;
                    }
                    _ => {
                        let c: Rational = parse_rational(base)?;
                        coeff *= num_traits::pow(c, e as usize);
                    }
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(Monomial::from_exps(exps), coeff);
        }
        Ok(p)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// JSON term: `{"coef":"p/q","x":[...],"y":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub x: Vec<u8>,
    pub y: Vec<u8>,
}

impl Polynomial {
    /// Terms in decreasing monomial order.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson { coef: fmt_rational(c), x: m.x().to_vec(), y: m.y().to_vec() })
            .collect()
    }

    pub fn from_json_terms(n: usize, terms: &[TermJson]) -> Result<Polynomial> {
        let pairs = terms
            .iter()
            .map(|t| Ok((Monomial::from_parts(&t.x, &t.y)?, parse_rational(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(n, pairs)
    }
}

pub fn format_rational(c: &Rational) -> String {
    fmt_rational(c)
}
