//! Bigraded subspaces of `Q[X_n, Y_n]`: derivative closures `M_D`, the
//! k-hole sums `M^k_{i,j}`, annihilator membership and the orbit layer.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::determinant::delta;
use crate::diagrams::{binomial, factorial, k_subsets, Cell, Partition};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::{apply_operator, Alphabet, Bidegree, Monomial, Polynomial, Rational};

/// Reduced echelon basis of one bidegree, keyed by pivot (the leading monomial, coefficient 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EchelonBlock {
    rows: BTreeMap<Monomial, Polynomial>,
}

impl EchelonBlock {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &Polynomial> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys()
    }

    /// Remainder of `p` modulo the block.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut r = p.clone();
        // Rows are fully reduced, so subtracting one never reintroduces another pivot.
        let hits: Vec<(Monomial, Rational)> = p
            .terms()
            .filter(|(m, _)| self.rows.contains_key(*m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in hits {
            r.axpy(&-c, &self.rows[&m]);
        }
        r
    }

    /// Adds `p` to the span. Returns whether the block grew.
    pub fn insert(&mut self, p: &Polynomial) -> bool {
        let r = self.reduce(p);
        let Some((lead, _)) = r.leading() else { return false };
        let lead = lead.clone();
        let r = r.monic();
        for row in self.rows.values_mut() {
            let c = row.coeff(&lead);
            if !c.is_zero() {
                row.axpy(&-c, &r);
            }
        }
        self.rows.insert(lead, r);
        true
    }
}

/// Which first-order derivatives a closure uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivatives {
    All,
    XOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    n: usize,
    blocks: BTreeMap<Bidegree, EchelonBlock>,
}

impl GradedSubspace {
    pub fn new(n: usize) -> Self {
        GradedSubspace { n, blocks: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    fn check_arity(&self, p: &Polynomial) -> Result<()> {
        if p.nvars() != self.n {
            return Err(Error::Arity { left: self.n, right: p.nvars() });
        }
        Ok(())
    }

    pub fn blocks(&self) -> &BTreeMap<Bidegree, EchelonBlock> {
        &self.blocks
    }

    pub fn block(&self, b: Bidegree) -> Option<&EchelonBlock> {
        self.blocks.get(&b)
    }

    /// Inserts every bihomogeneous component of `p`. Returns how many blocks grew.
    pub fn insert(&mut self, p: &Polynomial) -> Result<usize> {
        self.check_arity(p)?;
        let mut grew = 0;
        for (b, comp) in p.bihomogeneous_components() {
            if self.blocks.entry(b).or_default().insert(&comp) {
                grew += 1;
            }
        }
        Ok(grew)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        self.check_arity(p)?;
        Ok(p.bihomogeneous_components().into_iter().all(|(b, comp)| match self.blocks.get(&b) {
            Some(block) => block.reduce(&comp).is_zero(),
            None => false,
        }))
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> Result<bool> {
        for p in self.basis() {
            if !other.contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn basis(&self) -> impl Iterator<Item = &Polynomial> {
        self.blocks.values().flat_map(|b| b.rows())
    }

    pub fn dimension(&self) -> usize {
        self.blocks.values().map(EchelonBlock::len).sum()
    }

    /// `(dx, dy, dim)` sorted by bidegree, empty blocks omitted.
    pub fn hilbert_series(&self) -> Vec<(usize, usize, usize)> {
        self.blocks
            .iter()
            .filter(|(_, b)| !b.is_empty())
            .map(|(d, b)| (d.dx, d.dy, b.len()))
            .collect()
    }

    /// Keeps only the blocks of Y-degree zero.
    pub fn x_part(&self) -> GradedSubspace {
        GradedSubspace {
            n: self.n,
            blocks: self.blocks.iter().filter(|(b, _)| b.dy == 0).map(|(b, e)| (*b, e.clone())).collect(),
        }
    }

    /// Drops empty blocks so that equal spaces compare equal.
    fn normalized(mut self) -> Self {
        self.blocks.retain(|_, b| !b.is_empty());
        self
    }
}

/// Smallest space closed under the chosen first derivatives and containing every generator.
pub fn closure(n: usize, gens: &[Polynomial], mode: Derivatives) -> Result<GradedSubspace> {
    let mut space = GradedSubspace::new(n);
    for g in gens {
        space.insert(g)?;
    }
    let alphabets: &[Alphabet] = match mode {
        Derivatives::All => &[Alphabet::X, Alphabet::Y],
        Derivatives::XOnly => &[Alphabet::X],
    };
    let top = space.blocks.keys().map(Bidegree::total).max().unwrap_or(0);
    // Derivatives lower the total degree, so a block is final once all higher degrees are processed.
    for d in (1..=top).rev() {
        let at_degree: Vec<Bidegree> = space.blocks.keys().copied().filter(|b| b.total() == d).collect();
        for b in at_degree {
            let rows: Vec<Polynomial> = space.blocks[&b].rows().cloned().collect();
            for row in &rows {
                for &a in alphabets {
                    for i in 0..n {
                        let dp = row.derivative(a, i);
                        if !dp.is_zero() {
                            space.insert(&dp)?;
                        }
                    }
                }
            }
        }
    }
    Ok(space.normalized())
}

/// `M_P`: all partial derivatives of `P`. A mixed-degree `P` yields the closure of its components.
pub fn derivative_closure(p: &Polynomial) -> Result<GradedSubspace> {
    if p.is_zero() {
        return Err(Error::Domain("the closure of the zero polynomial is not considered".into()));
    }
    closure(p.nvars(), std::slice::from_ref(p), Derivatives::All)
}

pub fn sum_spaces(spaces: &[GradedSubspace]) -> Result<GradedSubspace> {
    let Some(first) = spaces.first() else {
        return Err(Error::Domain("empty sum of spaces".into()));
    };
    let mut out = first.clone();
    for s in &spaces[1..] {
        if s.n != out.n {
            return Err(Error::Arity { left: out.n, right: s.n });
        }
        for p in s.basis() {
            out.insert(p)?;
        }
    }
    Ok(out.normalized())
}

/// The k-subsets of the shadow of `c`, each sorted lexicographically by `(p, q)`.
pub fn hole_sets(mu: &Partition, c: Cell, k: usize) -> Result<Vec<Vec<Cell>>> {
    let shadow = mu.shadow(c)?;
    if k > shadow.len() {
        return Err(Error::Domain(format!("k = {k} exceeds the shadow size {}", shadow.len())));
    }
    let mut sets: Vec<Vec<Cell>> = k_subsets(&shadow, k)
        .into_iter()
        .map(|mut s| {
            s.sort_by_key(|x| (x.p, x.q));
            s
        })
        .collect();
    sets.sort_by(|a, b| {
        let ka: Vec<_> = a.iter().map(|x| (x.p, x.q)).collect();
        let kb: Vec<_> = b.iter().map(|x| (x.p, x.q)).collect();
        ka.cmp(&kb)
    });
    Ok(sets)
}

fn check_mkij(mu: &Partition, c: Cell, k: usize) -> Result<Vec<Vec<Cell>>> {
    let sets = hole_sets(mu, c, k)?;
    if k >= mu.size() {
        return Err(Error::Domain("at least one cell must remain after removing the holes".into()));
    }
    Ok(sets)
}

/// `Δ_{μ/S}` for every k-subset `S` of the shadow.
pub fn mkij_generators(mu: &Partition, c: Cell, k: usize) -> Result<Vec<Polynomial>> {
    check_mkij(mu, c, k)?
        .into_iter()
        .map(|s| delta(&mu.remove_cells(s)?.diagram()))
        .collect()
}

/// `X`-only polynomials whose `∂X`-closure is the Y-degree zero part of the full closure of `gens`.
pub fn y_layer_generators(gens: &[Polynomial]) -> Vec<Polynomial> {
    gens.iter().flat_map(|g| g.y_layers().into_values()).collect()
}

/// `M^k_{i,j}`; with `x_only`, its Y-degree zero part computed from Y-layers.
pub fn build_mkij(mu: &Partition, c: Cell, k: usize, x_only: bool) -> Result<GradedSubspace> {
    let gens = mkij_generators(mu, c, k)?;
    let n = mu.size() - k;
    if x_only {
        closure(n, &y_layer_generators(&gens), Derivatives::XOnly)
    } else {
        closure(n, &gens, Derivatives::All)
    }
}

/// `C(s,k) n!`.
pub fn mkij_bound(mu: &Partition, c: Cell, k: usize) -> Result<u128> {
    let s = mu.shadow_size(c)?;
    Ok(binomial(s, k) * factorial(mu.size().saturating_sub(k)))
}

/// `P(∂)` kills every `Δ_{μ/S}`.
pub fn ideal_member_direct(p: &Polynomial, mu: &Partition, c: Cell, k: usize) -> Result<bool> {
    let gens = mkij_generators(mu, c, k)?;
    for g in &gens {
        if !apply_operator(p, g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The derivatives `∂x_{n+1}^{a_1}∂y_{n+1}^{b_1}⋯∂x_{n+k}^{a_k}∂y_{n+k}^{b_k} Δ_μ` in `n+k` variables,
/// one per lexicographically sorted k-tuple of distinct shadow cells.
#[derive(Clone, Debug)]
pub struct IntersectionTargets {
    n: usize,
    targets: Vec<Polynomial>,
}

impl IntersectionTargets {
    pub fn new(mu: &Partition, c: Cell, k: usize) -> Result<Self> {
        let sets = check_mkij(mu, c, k)?;
        let total = mu.size();
        let n = total - k;
        let full = delta(&mu.cells())?;
        let mut targets = Vec::with_capacity(sets.len());
        for s in sets {
            let mut t = full.clone();
            for (r, cell) in s.iter().enumerate() {
                for _ in 0..cell.p {
                    t = t.derivative(Alphabet::X, n + r);
                }
                for _ in 0..cell.q {
                    t = t.derivative(Alphabet::Y, n + r);
                }
            }
            targets.push(t);
        }
        Ok(IntersectionTargets { n, targets })
    }

    pub fn targets(&self) -> &[Polynomial] {
        &self.targets
    }

    pub fn is_member(&self, p: &Polynomial) -> Result<bool> {
        if p.nvars() != self.n {
            return Err(Error::Arity { left: self.n, right: p.nvars() });
        }
        let q = p.embed(self.n + self.targets.first().map_or(0, |t| t.nvars() - self.n))?;
        for t in &self.targets {
            if !apply_operator(&q, t)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Membership in the intersection of the annihilators of the shadow derivatives of `Δ_μ`.
pub fn ideal_member_intersection(p: &Polynomial, mu: &Partition, c: Cell, k: usize) -> Result<bool> {
    IntersectionTargets::new(mu, c, k)?.is_member(p)
}

/// All monomials of the given bidegree in `n` variables, ascending.
pub fn monomials_of_bidegree(n: usize, b: Bidegree) -> Vec<Monomial> {
    fn compositions(n: usize, d: usize) -> Vec<Vec<u8>> {
        if n == 0 {
            return if d == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=d {
            for mut rest in compositions(n - 1, d - first) {
                rest.insert(0, first as u8);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for x in compositions(n, b.dx) {
        for y in compositions(n, b.dy) {
            out.push(Monomial::from_parts(&x, &y).expect("equal lengths"));
        }
    }
    out.sort();
    out
}

/// All monomials of total degree at most `d`, ascending.
pub fn monomials_up_to(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for t in 0..=d {
        for dx in 0..=t {
            out.extend(monomials_of_bidegree(n, Bidegree::new(dx, t - dx)));
        }
    }
    out.sort();
    out
}

/// Basis of the bidegree-`b` part of the annihilator ideal of `space`: its
/// orthogonal complement under the apolar pairing.
pub fn annihilator_basis(space: &GradedSubspace, b: Bidegree) -> Vec<Polynomial> {
    let n = space.nvars();
    let monos = monomials_of_bidegree(n, b);
    let rows: Vec<Vec<Rational>> = space
        .block(b)
        .map(|blk| {
            blk.rows()
                .map(|r| {
                    monos
                        .iter()
                        .map(|m| r.coeff(m) * Rational::from_integer(m.factorial_weight()))
                        .collect()
                })
                .collect()
        })
        .unwrap_or_default();
    let ns = if rows.is_empty() {
        (0..monos.len())
            .map(|i| (0..monos.len()).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(monos.len(), rows).nullspace()
    };
    ns.into_iter()
        .map(|v| {
            Polynomial::from_terms(n, monos.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero()))
                .expect("fixed arity")
        })
        .collect()
}

/// A point `(a_1..a_n, b_1..b_n)` of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitPoint {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

impl OrbitPoint {
    pub fn coordinates(&self) -> Vec<Rational> {
        self.a.iter().chain(&self.b).cloned().collect()
    }
}

fn check_distinct(v: &[Rational], need: usize, name: &str) -> Result<()> {
    if v.len() < need {
        return Err(Error::Degenerate(format!("{name} needs at least {need} entries")));
    }
    let set: BTreeSet<&Rational> = v.iter().collect();
    if set.len() != v.len() {
        return Err(Error::Degenerate(format!("entries of {name} must be distinct")));
    }
    Ok(())
}

/// `α_r = r`, `β_q = q`.
pub fn default_parameters(mu: &Partition) -> (Vec<Rational>, Vec<Rational>) {
    let a = (0..mu.num_rows()).map(|r| Rational::from_integer(BigInt::from(r))).collect();
    let b = (0..mu.num_cols()).map(|q| Rational::from_integer(BigInt::from(q))).collect();
    (a, b)
}

/// `ρ^k`: one point per injective filling of `μ` by `1..n` leaving `k` white shadow cells.
/// Entry `e` placed at `(p, q)` gets `a_e = α_p`, `b_e = β_q`.
pub fn orbit_points(
    mu: &Partition,
    c: Cell,
    k: usize,
    alpha: &[Rational],
    beta: &[Rational],
) -> Result<Vec<OrbitPoint>> {
    check_distinct(alpha, mu.num_rows(), "alpha")?;
    check_distinct(beta, mu.num_cols(), "beta")?;
    let sets = hole_sets(mu, c, k)?;
    let n = mu.size() - k;
    let mut out = BTreeSet::new();
    for white in sets {
        let filled: Vec<Cell> = mu.cells().cells().iter().copied().filter(|x| !white.contains(x)).collect();
        // Entry e sits at filled[perm[e]].
        for perm in permutations(n) {
            out.insert(OrbitPoint {
                a: perm.iter().map(|&i| alpha[filled[i].p].clone()).collect(),
                b: perm.iter().map(|&i| beta[filled[i].q].clone()).collect(),
            });
        }
    }
    Ok(out.into_iter().collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Polynomials of degree at most `d` vanishing on every point, from the nullspace of the evaluation matrix.
pub fn interpolate_annihilators(n: usize, points: &[OrbitPoint], d: usize) -> Result<Vec<Polynomial>> {
    let monos = monomials_up_to(n, d);
    let mut rows = Vec::with_capacity(points.len());
    for pt in points {
        if pt.a.len() != n || pt.b.len() != n {
            return Err(Error::Arity { left: n, right: pt.a.len() });
        }
        let coords = pt.coordinates();
        rows.push(
            monos
                .iter()
                .map(|m| {
                    m.exps().iter().zip(&coords).fold(Rational::one(), |acc, (&e, v)| {
                        if e == 0 {
                            acc
                        } else {
                            acc * num_traits::pow(v.clone(), e as usize)
                        }
                    })
                })
                .collect(),
        );
    }
    if rows.is_empty() {
        return Ok(monos.into_iter().map(|m| Polynomial::term(m, Rational::one())).collect());
    }
    let ns = Matrix::from_rows(monos.len(), rows).nullspace();
    Ok(ns
        .into_iter()
        .map(|v| Polynomial::from_terms(n, monos.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())).expect("fixed arity"))
        .collect())
}

/// Smallest degree whose monomial count exceeds the number of points.
/// With no variables only constants exist, so the answer is 0.
pub fn interpolation_degree(n: usize, npoints: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut d = 0;
    while monomials_up_to(n, d).len() <= npoints {
        d += 1;
    }
    d
}

/// The transfer polynomial `Q = P · ∏_r ∏_{i'<i} (x_{n+r} − α_{i'}) · ∏_r ∏_{j'<j} (y_{n+r} − β_{j'})`.
pub fn transfer_polynomial(
    p: &Polynomial,
    mu: &Partition,
    c: Cell,
    k: usize,
    alpha: &[Rational],
    beta: &[Rational],
) -> Result<Polynomial> {
    let total = mu.size();
    let n = total - k;
    let mut q = p.embed(total)?;
    for r in 0..k {
        for a in &alpha[..c.p] {
            let f = Polynomial::x(total, n + r).sub(&Polynomial::constant(total, a.clone()))?;
            q = q.mul(&f)?;
        }
        for b in &beta[..c.q] {
            let f = Polynomial::y(total, n + r).sub(&Polynomial::constant(total, b.clone()))?;
            q = q.mul(&f)?;
        }
    }
    Ok(q)
}

/// Checks that `Q` vanishes on the full orbit of `μ`, given that `P` vanishes on `ρ^k`.
pub fn orbit_vanishing_transfer(
    p: &Polynomial,
    mu: &Partition,
    c: Cell,
    k: usize,
    alpha: &[Rational],
    beta: &[Rational],
) -> Result<bool> {
    let n = mu.size().checked_sub(k).ok_or_else(|| Error::Domain("k exceeds |mu|".into()))?;
    if p.nvars() != n {
        return Err(Error::Arity { left: n, right: p.nvars() });
    }
    let small = orbit_points(mu, c, k, alpha, beta)?;
    for pt in &small {
        if !p.evaluate(&pt.coordinates())?.is_zero() {
            return Err(Error::Precondition("P does not vanish on the k-hole orbit".into()));
        }
    }
    let q = transfer_polynomial(p, mu, c, k, alpha, beta)?;
    for pt in orbit_points(mu, Cell::new(0, 0), 0, alpha, beta)? {
        if !q.evaluate(&pt.coordinates())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::LatticeDiagram;
    use crate::polycore::rat;
    use crate::symmetric::power_sum;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn poly(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    fn holed(mu: &str, holes: &[(usize, usize)]) -> Polynomial {
        let d = part(mu).remove_cells(holes.iter().map(|&(p, q)| Cell::new(p, q))).unwrap().diagram();
        delta(&d).unwrap()
    }

    /// Brute-force oracle: all iterated derivatives of the components of `p`
    /// collected in a dense matrix over every monomial that occurs, rank via `linalg`.
    fn brute_dimension(p: &Polynomial) -> usize {
        let n = p.nvars();
        let mut seen: std::collections::HashSet<Polynomial> = std::collections::HashSet::new();
        let mut frontier: Vec<Polynomial> = p.bihomogeneous_components().into_values().collect();
        while let Some(q) = frontier.pop() {
            if q.is_zero() || !seen.insert(q.clone()) {
                continue;
            }
            for a in [Alphabet::X, Alphabet::Y] {
                for i in 0..n {
                    frontier.push(q.derivative(a, i));
                }
            }
        }
        let monos: Vec<Monomial> =
            seen.iter().flat_map(|q| q.terms().map(|(m, _)| m.clone())).collect::<BTreeSet<_>>().into_iter().collect();
        let rows = seen.iter().map(|q| monos.iter().map(|m| q.coeff(m)).collect()).collect();
        Matrix::from_rows(monos.len(), rows).rank()
    }

    #[test]
    fn small_closures() {
        let s = derivative_closure(&poly("x1", 1)).unwrap();
        assert_eq!(s.hilbert_series(), vec![(0, 0, 1), (1, 0, 1)]);
        let s = derivative_closure(&poly("x2 - x1", 2)).unwrap();
        assert_eq!(s.dimension(), 2);
        let m21 = derivative_closure(&delta(&part("2,1").cells()).unwrap()).unwrap();
        assert_eq!(m21.dimension(), 6);
        assert_eq!(m21.hilbert_series(), vec![(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 1)]);
        assert_eq!(
            derivative_closure(&delta(&part("1,1").cells()).unwrap()).unwrap().hilbert_series(),
            vec![(0, 0, 1), (1, 0, 1)]
        );
        assert_eq!(
            derivative_closure(&delta(&part("2").cells()).unwrap()).unwrap().hilbert_series(),
            vec![(0, 0, 1), (0, 1, 1)]
        );
        assert!(derivative_closure(&Polynomial::zero(2)).is_err());
    }

    #[test]
    fn closure_matches_brute_force() {
        for d in ["(0,0);(1,0);(0,1)", "(0,0);(2,0);(0,1)", "(0,0);(1,1);(0,2)", "(1,0);(0,1);(1,1);(0,0)"] {
            let p = delta(&d.parse::<LatticeDiagram>().unwrap()).unwrap();
            assert_eq!(derivative_closure(&p).unwrap().dimension(), brute_dimension(&p), "{d}");
        }
        let p = poly("x1^2*y2 + x2^3 - y1*y2", 2);
        assert_eq!(derivative_closure(&p).unwrap().dimension(), brute_dimension(&p));
    }

    #[test]
    fn closure_is_a_fixpoint() {
        let s = derivative_closure(&delta(&part("2,2").cells()).unwrap()).unwrap();
        assert_eq!(s.dimension(), 24);
        for row in s.basis() {
            for a in [Alphabet::X, Alphabet::Y] {
                for i in 0..4 {
                    assert!(s.contains(&row.derivative(a, i)).unwrap());
                }
            }
        }
    }

    #[test]
    fn sums() {
        let a = derivative_closure(&poly("x1", 2)).unwrap();
        let b = derivative_closure(&poly("x2", 2)).unwrap();
        let s = sum_spaces(&[a.clone(), b]).unwrap();
        assert_eq!(s.hilbert_series(), vec![(0, 0, 1), (1, 0, 2)]);
        assert_eq!(sum_spaces(&[a.clone(), a.clone()]).unwrap(), a);
        assert!(sum_spaces(&[a, derivative_closure(&poly("x1", 1)).unwrap()]).is_err());
    }

    #[test]
    fn membership() {
        let m21 = derivative_closure(&delta(&part("2,1").cells()).unwrap()).unwrap();
        assert!(m21.contains(&delta(&part("2,1").cells()).unwrap()).unwrap());
        // x1*y1*x2 has bidegree (2,1), above the top degree (1,1).
        assert!(!m21.contains(&poly("x1*y1*x2", 3)).unwrap());
        assert!(m21.contains(&Polynomial::zero(3)).unwrap());
    }

    #[test]
    fn counterexample_to_partition_shaped_holes() {
        let a = derivative_closure(&holed("3,2", &[(0, 0), (1, 0), (0, 1)])).unwrap();
        let b = derivative_closure(&holed("3,2", &[(0, 0), (0, 1), (0, 2)])).unwrap();
        let s = sum_spaces(&[a, b]).unwrap();
        assert!(!s.contains(&holed("3,2", &[(0, 0), (1, 0), (0, 2)])).unwrap());
    }

    #[test]
    fn two_hole_space_has_two_generators() {
        let mu = part("3,2");
        let m2 = build_mkij(&mu, Cell::new(0, 0), 2, false).unwrap();
        let a = derivative_closure(&holed("3,2", &[(0, 0), (0, 1)])).unwrap();
        let b = derivative_closure(&holed("3,2", &[(0, 0), (1, 0)])).unwrap();
        let s = sum_spaces(&[a, b]).unwrap();
        assert!(m2.is_subspace_of(&s).unwrap() && s.is_subspace_of(&m2).unwrap());
        assert_eq!(m2, s);
    }

    #[test]
    fn mkij_examples() {
        let mu = part("2,1");
        let full = build_mkij(&mu, Cell::new(0, 0), 0, false).unwrap();
        assert_eq!(full, derivative_closure(&delta(&mu.cells()).unwrap()).unwrap());

        let m1 = build_mkij(&mu, Cell::new(0, 0), 1, false).unwrap();
        assert_eq!(m1.dimension(), 6);
        assert_eq!(mkij_bound(&mu, Cell::new(0, 0), 1).unwrap(), 6);
        let x = build_mkij(&mu, Cell::new(0, 0), 1, true).unwrap();
        assert_eq!(x, m1.x_part());
        assert_eq!(x.dimension(), 3);

        let m = build_mkij(&part("1,1"), Cell::new(0, 0), 1, false).unwrap();
        assert_eq!(m.dimension(), 2);
        assert!(matches!(build_mkij(&mu, Cell::new(0, 1), 2, false), Err(Error::Domain(_))));
        assert!(matches!(build_mkij(&mu, Cell::new(0, 0), 3, false), Err(Error::Domain(_))));
    }

    #[test]
    fn one_hole_closure_contains_all_shadow_holes() {
        let mu = part("3,2");
        let m1 = build_mkij(&mu, Cell::new(0, 0), 1, false).unwrap();
        let single = derivative_closure(&holed("3,2", &[(0, 0)])).unwrap();
        assert_eq!(m1, single);
        assert_eq!(m1.dimension(), 5 * 24);
    }

    #[test]
    fn ideal_membership_routes_agree() {
        let mu = part("2,1");
        let c = Cell::new(0, 0);
        let one = Polynomial::one(2);
        assert!(!ideal_member_direct(&one, &mu, c, 1).unwrap());
        assert!(!ideal_member_intersection(&one, &mu, c, 1).unwrap());
        let p1 = power_sum(2, 1, Alphabet::X);
        assert_eq!(
            ideal_member_direct(&p1, &mu, c, 1).unwrap(),
            ideal_member_intersection(&p1, &mu, c, 1).unwrap()
        );
        let high = power_sum(2, 3, Alphabet::X);
        assert!(ideal_member_direct(&high, &mu, c, 1).unwrap());
        assert!(ideal_member_intersection(&high, &mu, c, 1).unwrap());
    }

    #[test]
    fn annihilators_pair_to_zero() {
        let mu = part("2,2");
        let c = Cell::new(0, 0);
        let space = build_mkij(&mu, c, 1, false).unwrap();
        for b in [Bidegree::new(1, 0), Bidegree::new(1, 1), Bidegree::new(2, 1)] {
            let ann = annihilator_basis(&space, b);
            let total = monomials_of_bidegree(3, b).len();
            assert_eq!(ann.len() + space.block(b).map_or(0, EchelonBlock::len), total);
            for p in &ann {
                assert!(ideal_member_direct(p, &mu, c, 1).unwrap());
                assert!(ideal_member_intersection(p, &mu, c, 1).unwrap());
            }
        }
    }

    #[test]
    fn orbits() {
        let (a, b) = default_parameters(&part("2,1"));
        assert_eq!(orbit_points(&part("1"), Cell::new(0, 0), 0, &a, &b).unwrap().len(), 1);
        assert_eq!(orbit_points(&part("2,1"), Cell::new(0, 0), 1, &a, &b).unwrap().len(), 6);
        assert_eq!(orbit_points(&part("2,1"), Cell::new(0, 0), 0, &a, &b).unwrap().len(), 6);
        assert!(matches!(
            orbit_points(&part("2,1"), Cell::new(0, 0), 1, &[rat(0), rat(0)], &b),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn transfer() {
        let mu = part("2,1");
        let c = Cell::new(0, 1);
        let (a, b) = default_parameters(&mu);
        assert!(orbit_vanishing_transfer(&Polynomial::zero(2), &mu, c, 1, &a, &b).unwrap());
        let pts = orbit_points(&mu, c, 1, &a, &b).unwrap();
        let d = interpolation_degree(2, pts.len());
        let anns = interpolate_annihilators(2, &pts, d).unwrap();
        assert!(!anns.is_empty());
        for p in &anns {
            assert!(orbit_vanishing_transfer(p, &mu, c, 1, &a, &b).unwrap());
        }
        assert!(matches!(
            orbit_vanishing_transfer(&Polynomial::one(2), &mu, c, 1, &a, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interpolation_without_variables() {
        let mu = part("1");
        let (a, b) = default_parameters(&mu);
        let pts = orbit_points(&mu, Cell::new(0, 0), 1, &a, &b).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(interpolation_degree(0, pts.len()), 0);
        assert!(interpolate_annihilators(0, &pts, 0).unwrap().is_empty());
        assert_eq!(interpolation_degree(1, 2), 1);
        assert_eq!(interpolation_degree(1, 3), 2);
    }
}
