//! The explicit basis of the Y-degree zero part of `M^k_{i,j}`.
//!
//! Values are X-monomial derivatives of the Y-layer coefficients of
//! `Δ_{μ_F^k}`: writing `Δ = Σ_β y^β c_β(X)`, the index `(β, a)` stands for
//! `∂X^a c_β`, which is (up to `β!`) the Y-degree zero part of
//! `∂X^a ∂Y^β Δ`. Index sets are extracted greedily from `Δ_{μ_F}`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::combinatorics::{count_t, depth_tuple, enum_f, mu_f, mu_f_holes, DepthTuple, Selection};
use crate::determinant::{delta, extract_diagram_coefficients};
use crate::diagrams::{Cell, LatticeDiagram, Partition};
use crate::error::{Error, Result};
use crate::polycore::{apply_operator, Alphabet, Monomial, Polynomial, Rational};
use crate::spaces::{build_mkij, closure, Derivatives, GradedSubspace};
use crate::symmetric::complete;

/// `∂X^xmon` applied to the coefficient of `y^layer`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialIndex {
    pub layer: Vec<u8>,
    pub xmon: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub selection: Selection,
    pub index: MonomialIndex,
    #[serde(serialize_with = "ser_poly")]
    pub value: Polynomial,
}

fn ser_poly<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasisFamily {
    pub entries: Vec<BasisEntry>,
}

impl BasisFamily {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The coefficients `c_β(X)` of `Δ_D = Σ_β y^β c_β(X)`, by increasing `β`.
pub fn x_part_generators(d: &LatticeDiagram) -> Result<Vec<Polynomial>> {
    Ok(delta(d)?.y_layers().into_values().collect())
}

/// `∂X`-closure of the layer coefficients.
pub fn x_space(d: &LatticeDiagram) -> Result<GradedSubspace> {
    closure(d.len(), &x_part_generators(d)?, Derivatives::XOnly)
}

fn x_monomial_operator(n: usize, xmon: &[u8]) -> Polynomial {
    let m = Monomial::from_parts(xmon, &vec![0; n]).expect("equal lengths");
    Polynomial::term(m, Rational::from_integer(1.into()))
}

fn index_value(layers: &std::collections::BTreeMap<Vec<u8>, Polynomial>, idx: &MonomialIndex) -> Result<Polynomial> {
    let c = layers
        .get(&idx.layer)
        .ok_or_else(|| Error::Precondition(format!("no layer {:?}", idx.layer)))?;
    apply_operator(&x_monomial_operator(c.nvars(), &idx.xmon), c)
}

/// Indices whose values form a basis of `x_space(D)`, chosen degree by
/// degree: layers first, then every `x_i · a` over the kept `a` of the
/// previous level, kept when independent of everything kept so far.
pub fn greedy_monomial_basis(d: &LatticeDiagram) -> Result<Vec<MonomialIndex>> {
    let n = d.len();
    let layers = delta(d)?.y_layers();
    let mut kept = Vec::new();
    let mut span = GradedSubspace::new(n);
    let mut level: BTreeSet<MonomialIndex> =
        layers.keys().map(|b| MonomialIndex { layer: b.clone(), xmon: vec![0; n] }).collect();
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for idx in level {
            let v = index_value(&layers, &idx)?;
            if v.is_zero() || span.insert(&v)? == 0 {
                continue;
            }
            for i in 0..n {
                let mut xmon = idx.xmon.clone();
                xmon[i] += 1;
                next.insert(MonomialIndex { layer: idx.layer.clone(), xmon });
            }
            kept.push(idx);
        }
        level = next;
    }
    Ok(kept)
}

/// `{∂X^a c_β(Δ_{μ_F^k})}` over the selections `F` and the greedy indices of `μ_F`.
pub fn build_b(mu: &Partition, c: Cell, k: usize) -> Result<BasisFamily> {
    if k >= mu.size() {
        return Err(Error::Domain("at least one cell must remain after removing the holes".into()));
    }
    let mut entries = Vec::new();
    for sel in enum_f(mu, c, k)? {
        let shape = mu_f(&sel);
        let holed = mu_f_holes(&sel)?.diagram();
        let layers = delta(&holed)?.y_layers();
        for index in greedy_monomial_basis(&shape.cells())? {
            let value = index_value(&layers, &index)?;
            entries.push(BasisEntry { selection: sel.clone(), index, value });
        }
    }
    Ok(BasisFamily { entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisVerification {
    pub size: usize,
    pub rank: usize,
    pub tableaux: u128,
    pub x_dimension: usize,
    pub contained: bool,
}

impl BasisVerification {
    /// Independent, inside the space, and as large as both `#T` and the space.
    pub fn holds(&self) -> bool {
        self.rank == self.size
            && self.contained
            && self.size as u128 == self.tableaux
            && self.size == self.x_dimension
    }
}

/// Rank, containment in the Y-degree zero part of `M^k_{i,j}`, and the size comparisons.
pub fn verify_b(family: &BasisFamily, mu: &Partition, c: Cell, k: usize) -> Result<BasisVerification> {
    let space = build_mkij(mu, c, k, true)?;
    let n = space.nvars();
    let mut span = GradedSubspace::new(n);
    let mut contained = true;
    for e in &family.entries {
        span.insert(&e.value)?;
        contained &= space.contains(&e.value)?;
    }
    Ok(BasisVerification {
        size: family.len(),
        rank: span.dimension(),
        tableaux: count_t(mu, c, k)?,
        x_dimension: space.dimension(),
        contained,
    })
}

/// `build_b` followed by `verify_b`; a failed check is a theorem violation.
pub fn build_b_verified(mu: &Partition, c: Cell, k: usize) -> Result<(BasisFamily, BasisVerification)> {
    let family = build_b(mu, c, k)?;
    let v = verify_b(&family, mu, c, k)?;
    if !v.holds() {
        return Err(Error::TheoremViolation(format!("basis check failed for ({mu}) {c} k={k}: {v:?}")));
    }
    Ok((family, v))
}

/// How a depth tuple `(d_1 ≤ … ≤ d_k)` becomes a product of `h`-operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KillSchedule {
    /// `∏_m h_{k-m+1}^{d_m - d_{m-1}}`.
    Descending,
    /// `∏_m h_m^{d_m - d_{m-1}}`.
    Ascending,
}

impl KillSchedule {
    /// `(subscript, exponent)` factors, zero exponents dropped.
    pub fn factors(self, depths: &DepthTuple) -> Vec<(usize, usize)> {
        let d = &depths.0;
        let k = d.len();
        let mut out = Vec::new();
        let mut prev = 0;
        for (m, &dm) in d.iter().enumerate() {
            let sub = match self {
                KillSchedule::Descending => k - m,
                KillSchedule::Ascending => m + 1,
            };
            if dm > prev {
                out.push((sub, dm - prev));
            }
            prev = dm;
        }
        out
    }

    /// Applies the factors to `p` as `∂X`-operators.
    pub fn apply(self, depths: &DepthTuple, p: &Polynomial) -> Result<Polynomial> {
        let n = p.nvars();
        let mut out = p.clone();
        for (sub, e) in self.factors(depths) {
            let h = complete(n, sub, Alphabet::X);
            for _ in 0..e {
                out = apply_operator(&h, &out)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillRow {
    pub circled: Vec<Cell>,
    pub depths: DepthTuple,
    pub killed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillReport {
    pub schedule: KillSchedule,
    pub target: DepthTuple,
    pub rows: Vec<KillRow>,
    /// Every selection with a lexicographically smaller depth tuple is killed.
    pub smaller_killed: bool,
    pub target_survives: bool,
    /// The surviving image of the target is a multiple of `Δ_{μ_F}`.
    pub target_is_multiple_of_mu_f: bool,
}

impl KillReport {
    pub fn holds(&self) -> bool {
        self.smaller_killed && self.target_survives
    }
}

/// Applies the operator built from the target's depth tuple to every `Δ_{μ_F^k}`.
pub fn depth_filtration_kill(target: &Selection, schedule: KillSchedule) -> Result<KillReport> {
    let (mu, c, k) = (&target.shape, target.anchor, target.k());
    let target_depths = depth_tuple(&mu_f_holes(target)?);
    let mut rows = Vec::new();
    let mut smaller_killed = true;
    let mut target_survives = false;
    let mut target_is_multiple_of_mu_f = false;
    for sel in enum_f(mu, c, k)? {
        let hd = mu_f_holes(&sel)?;
        let depths = depth_tuple(&hd);
        let image = schedule.apply(&target_depths, &delta(&hd.diagram())?)?;
        let killed = image.is_zero();
        if depths < target_depths && !killed {
            smaller_killed = false;
        }
        if sel == *target {
            target_survives = !killed;
            target_is_multiple_of_mu_f =
                !killed && extract_diagram_coefficients(&image, &[mu_f(&sel).cells()]).is_ok();
        }
        rows.push(KillRow { circled: sel.circled.iter().copied().collect(), depths, killed });
    }
    Ok(KillReport { schedule, target: target_depths, rows, smaller_killed, target_survives, target_is_multiple_of_mu_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::depth_classes;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn diag(s: &str) -> LatticeDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn layer_generators() {
        let g = x_part_generators(&diag("(0,0);(1,0)")).unwrap();
        assert_eq!(g, vec![Polynomial::parse("x2 - x1", 2).unwrap()]);
        let g = x_part_generators(&diag("(0,0);(0,1)")).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|p| p.bidegree().map(|b| b.dx) == Some(0)));
        let g = x_part_generators(&part("2,1").cells()).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|p| p.bidegree().map(|b| (b.dx, b.dy)) == Some((1, 0))));
    }

    #[test]
    fn x_spaces() {
        assert_eq!(x_space(&part("2,1").cells()).unwrap().dimension(), 3);
        assert_eq!(x_space(&diag("(0,0);(1,0)")).unwrap().dimension(), 2);
        assert_eq!(x_space(&part("1,1,1").cells()).unwrap().dimension(), 6);
    }

    #[test]
    fn x_space_is_the_y_free_part_of_the_full_closure() {
        for d in ["(0,0);(1,0);(0,1)", "(0,1);(2,0);(1,1)", "(0,0);(1,0);(0,1);(1,1)", "(1,0);(0,2);(1,1);(0,0)"] {
            let d = diag(d);
            let full = crate::spaces::derivative_closure(&delta(&d).unwrap()).unwrap();
            assert_eq!(x_space(&d).unwrap(), full.x_part(), "{d}");
        }
    }

    #[test]
    fn greedy_sizes() {
        assert_eq!(greedy_monomial_basis(&diag("(0,0);(1,0)")).unwrap().len(), 2);
        assert_eq!(greedy_monomial_basis(&part("2,1").cells()).unwrap().len(), 3);
        assert_eq!(greedy_monomial_basis(&part("2,2").cells()).unwrap().len(), 6);
        for mu in Partition::up_to(5) {
            assert_eq!(greedy_monomial_basis(&mu.cells()).unwrap().len() as u128, mu.multinomial(), "({mu})");
        }
    }

    #[test]
    fn basis_examples() {
        for (mu, c, k) in [("2,1", (0, 0), 1), ("2,2", (0, 0), 1), ("2,1", (0, 0), 2), ("3,2", (0, 1), 2)] {
            let mu = part(mu);
            let (fam, v) = build_b_verified(&mu, Cell::new(c.0, c.1), k).unwrap();
            assert_eq!(fam.len(), v.x_dimension);
        }
        let mu = part("2,1");
        let (fam, v) = build_b_verified(&mu, Cell::new(0, 0), 0).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(v.tableaux, 3);
        assert!(build_b(&part("1,1"), Cell::new(0, 0), 2).is_err());
    }

    #[test]
    fn schedules() {
        let d = DepthTuple(vec![1, 1, 3]);
        assert_eq!(KillSchedule::Descending.factors(&d), vec![(3, 1), (1, 2)]);
        assert_eq!(KillSchedule::Ascending.factors(&d), vec![(1, 1), (3, 2)]);
    }

    #[test]
    fn depth_kill_on_small_shapes() {
        for (mu, k) in [("2,2", 1), ("2,1", 1), ("3,2", 2), ("2,2,1", 2)] {
            let mu = part(mu);
            let classes = depth_classes(&mu, Cell::new(0, 0), k).unwrap();
            let target = classes.values().last().unwrap()[0].clone();
            let r = depth_filtration_kill(&target, KillSchedule::Descending).unwrap();
            assert!(r.holds(), "({mu}) k={k}: {r:?}");
        }
        let single = enum_f(&part("1"), Cell::new(0, 0), 0).unwrap();
        assert!(depth_filtration_kill(&single[0], KillSchedule::Descending).unwrap().holds());
    }
}
