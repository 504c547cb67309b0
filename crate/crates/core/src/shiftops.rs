//! Shift operators: `p_k(∂)`, `e_k(∂)`, `h_k(∂)` acting on lattice
//! determinants, computed as moves on diagrams.
//!
//! * `p_k` pushes one cell `k` steps down (towards row 0 for the X alphabet,
//!   towards column 0 for Y).
//! * `e_k` pushes `k` distinct cells one step down each.
//! * `h_k` pushes `k` distinct holes (cells of the complement) one step up
//!   each. A vertical run of chosen holes under a cell lets that cell drop by
//!   the length of the run.
//!
//! Every expansion is checked against direct differentiation of the
//! determinant in the tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::determinant::{delta, extract_diagram_coefficients};
use crate::diagrams::{k_subsets, Cell, LatticeDiagram, Partition};
use crate::error::{Error, Result};
use crate::polycore::{apply_operator, falling, Alphabet, Polynomial, Rational};
use crate::symmetric::{complete, elementary, power_sum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftOp {
    PowerSum,
    Elementary,
    Complete,
}

impl ShiftOp {
    pub fn symmetric(self, n: usize, k: usize, a: Alphabet) -> Polynomial {
        match self {
            ShiftOp::PowerSum => power_sum(n, k, a),
            ShiftOp::Elementary => elementary(n, k, a),
            ShiftOp::Complete => complete(n, k, a),
        }
    }
}

impl std::str::FromStr for ShiftOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pk" | "p" => Ok(ShiftOp::PowerSum),
            "ek" | "e" => Ok(ShiftOp::Elementary),
            "hk" | "h" => Ok(ShiftOp::Complete),
            _ => Err(Error::Parse(format!("unknown shift operator {s:?}"))),
        }
    }
}

/// `Σ c · Δ_D` with distinct diagrams and nonzero coefficients, sorted by diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedDiagramSum {
    pub terms: Vec<(Rational, LatticeDiagram)>,
}

impl SignedDiagramSum {
    fn from_map(map: BTreeMap<LatticeDiagram, Rational>) -> Self {
        SignedDiagramSum {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(d, c)| (c, d)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Re-expands through `delta` in `n` variables.
    pub fn to_polynomial(&self, n: usize) -> Result<Polynomial> {
        let mut out = Polynomial::zero(n);
        for (c, d) in &self.terms {
            if d.len() != n {
                return Err(Error::Arity { left: n, right: d.len() });
            }
            out = out.add(&delta(d)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn coefficient(&self, d: &LatticeDiagram) -> Rational {
        self.terms
            .iter()
            .find(|(_, e)| e == d)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

impl Serialize for SignedDiagramSum {
    /// `[["coef", [[p,q],...]], ...]`
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (c, d) in &self.terms {
            seq.serialize_element(&(crate::polycore::format_rational(c), d.cells()))?;
        }
        seq.end()
    }
}

fn coord(c: Cell, a: Alphabet) -> usize {
    match a {
        Alphabet::X => c.p,
        Alphabet::Y => c.q,
    }
}

fn step(c: Cell, a: Alphabet, up: bool, k: usize) -> Option<Cell> {
    let v = coord(c, a);
    let nv = if up { v + k } else { v.checked_sub(k)? };
    Some(match a {
        Alphabet::X => Cell::new(nv, c.q),
        Alphabet::Y => Cell::new(c.p, nv),
    })
}

/// Sign of the permutation sorting `list` into pseudo-lex order; `None` on repeated cells.
pub fn reorder_sign(list: &[Cell]) -> Option<bool> {
    let mut positive = true;
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            match list[i].cmp(&list[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => positive = !positive,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(positive)
}

fn accumulate(map: &mut BTreeMap<LatticeDiagram, Rational>, list: Vec<Cell>, magnitude: u64) {
    if magnitude == 0 {
        return;
    }
    let Some(positive) = reorder_sign(&list) else { return };
    let d = LatticeDiagram::new(list).expect("distinct after sign check");
    let c = Rational::from_integer(BigInt::from(magnitude));
    *map.entry(d).or_insert_with(Rational::zero) += if positive { c } else { -c };
}

fn require_positive(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("shift operators need k >= 1".into()));
    }
    Ok(())
}

/// `p_k(∂) Δ_L` as a sum of diagrams: one cell moved `k` steps down.
pub fn pk_apply(k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<SignedDiagramSum> {
    require_positive(k)?;
    let mut map = BTreeMap::new();
    for (idx, &c) in l.cells().iter().enumerate() {
        let Some(moved) = step(c, a, false, k) else { continue };
        let mut list = l.cells().to_vec();
        list[idx] = moved;
        accumulate(&mut map, list, falling(coord(c, a) as u64, k as u64));
    }
    Ok(SignedDiagramSum::from_map(map))
}

/// `e_k(∂) Δ_L`: `k` distinct cells moved one step down each.
pub fn ek_apply(k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<SignedDiagramSum> {
    require_positive(k)?;
    let movable: Vec<usize> = (0..l.len()).filter(|&i| coord(l.cells()[i], a) >= 1).collect();
    let mut map = BTreeMap::new();
    for subset in k_subsets(&movable, k) {
        let mut list = l.cells().to_vec();
        let mut magnitude = 1u64;
        for &i in &subset {
            magnitude *= coord(list[i], a) as u64;
            list[i] = step(list[i], a, false, 1).expect("coordinate >= 1");
        }
        accumulate(&mut map, list, magnitude);
    }
    Ok(SignedDiagramSum::from_map(map))
}

/// Complement cells lying below some cell of `l` on the same line. Only these can move up.
pub fn active_holes(l: &LatticeDiagram, a: Alphabet) -> Vec<Cell> {
    let mut tops: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in l.cells() {
        let line = coord(c, a.other());
        let v = coord(c, a);
        let e = tops.entry(line).or_insert(v);
        *e = (*e).max(v);
    }
    let mut out = Vec::new();
    for (&line, &top) in &tops {
        for v in 0..top {
            let c = match a {
                Alphabet::X => Cell::new(v, line),
                Alphabet::Y => Cell::new(line, v),
            };
            if !l.contains(c) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// `h_k(∂) Δ_L`: `k` distinct holes moved one step up each.
pub fn hk_apply(k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<SignedDiagramSum> {
    require_positive(k)?;
    let holes = active_holes(l, a);
    let index_of: BTreeMap<Cell, usize> = l.cells().iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut map = BTreeMap::new();
    'subsets: for chosen in k_subsets(&holes, k) {
        let set: std::collections::BTreeSet<Cell> = chosen.iter().copied().collect();
        let mut list = l.cells().to_vec();
        let mut magnitude = 1u64;
        for &h in &chosen {
            let above = step(h, a, true, 1).expect("no overflow");
            if set.contains(&above) {
                continue;
            }
            let Some(&cell_idx) = index_of.get(&above) else { continue 'subsets };
            // h tops a run of chosen holes; the cell above falls to its bottom.
            let mut run = 1;
            let mut bottom = h;
            while let Some(below) = step(bottom, a, false, 1) {
                if !set.contains(&below) {
                    break;
                }
                bottom = below;
                run += 1;
            }
            magnitude *= falling(coord(above, a) as u64, run as u64);
            list[cell_idx] = bottom;
        }
        accumulate(&mut map, list, magnitude);
    }
    Ok(SignedDiagramSum::from_map(map))
}

pub fn shift_apply(op: ShiftOp, k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<SignedDiagramSum> {
    match op {
        ShiftOp::PowerSum => pk_apply(k, l, a),
        ShiftOp::Elementary => ek_apply(k, l, a),
        ShiftOp::Complete => hk_apply(k, l, a),
    }
}

/// The same operator applied by differentiating `Δ_L` directly.
pub fn direct_apply(op: ShiftOp, k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<Polynomial> {
    let d = delta(l)?;
    apply_operator(&op.symmetric(l.len(), k, a), &d)
}

/// Checks `h_k(∂)Δ_L = Σ_{m=1}^{k} (-1)^{m+1} (h_{k-m} e_m)(∂)Δ_L`.
pub fn newton_recursion_check(k: usize, l: &LatticeDiagram, a: Alphabet) -> Result<bool> {
    if k < 2 {
        return Err(Error::Domain("the recursion check needs k >= 2".into()));
    }
    let n = l.len();
    let d = delta(l)?;
    let lhs = apply_operator(&complete(n, k, a), &d)?;
    let mut rhs = Polynomial::zero(n);
    for m in 1..=k {
        let op = complete(n, k - m, a).mul(&elementary(n, m, a))?;
        let t = apply_operator(&op, &d)?;
        rhs = if m % 2 == 1 { rhs.add(&t)? } else { rhs.sub(&t)? };
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoHoleVariant {
    /// `e_{k-1}(X) p_l(Y)` on the vertical pair `{(i,j),(i+1,j)}`.
    Horizontal,
    /// `e_{l-1}(Y) p_k(X)` on the horizontal pair `{(i,j),(i,j+1)}`.
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRelation {
    Same,
    Opposite,
    Degenerate,
}

impl SignRelation {
    fn of(a: &Rational, b: &Rational) -> Self {
        let p = a * b;
        if p.is_positive() {
            SignRelation::Same
        } else if p.is_negative() {
            SignRelation::Opposite
        } else {
            SignRelation::Degenerate
        }
    }
}

/// `true` when listing the cells row by row (sort by `(p, q)`) is an even
/// permutation of the pseudo-lex listing.
pub fn row_major_is_even(d: &LatticeDiagram) -> bool {
    let mut even = true;
    let c = d.cells();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if (c[i].p, c[i].q) > (c[j].p, c[j].q) {
                even = !even;
            }
        }
    }
    even
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoHoleReport {
    pub source: LatticeDiagram,
    /// `μ/{(i,j),(i+k,j+l)}` and `μ/{(i+k,j),(i,j+l)}`.
    pub targets: [LatticeDiagram; 2],
    /// Coefficients against the pseudo-lex oriented determinants.
    pub constants: [Rational; 2],
    pub relation: SignRelation,
    /// The relation after orienting every determinant (source and targets) by row-major cell order.
    pub row_major_relation: SignRelation,
}

impl TwoHoleReport {
    /// Horizontal: same sign. Vertical: opposite signs. Read with row-major orientation.
    pub fn matches_stated_signs(&self, variant: TwoHoleVariant) -> bool {
        let want = match variant {
            TwoHoleVariant::Horizontal => SignRelation::Same,
            TwoHoleVariant::Vertical => SignRelation::Opposite,
        };
        self.row_major_relation == want
    }
}

/// Solves the two-hole shift identity for one placement and checks the residual is zero.
pub fn two_hole_identity(
    mu: &Partition,
    anchor: Cell,
    k: usize,
    l: usize,
    variant: TwoHoleVariant,
) -> Result<TwoHoleReport> {
    if k == 0 || l == 0 {
        return Err(Error::Precondition("k and l must be positive".into()));
    }
    let (i, j) = (anchor.p, anchor.q);
    let holed = |holes: [Cell; 2]| -> Result<LatticeDiagram> {
        mu.remove_cells(holes)
            .map(|h| h.diagram())
            .map_err(|e| Error::Precondition(format!("holes {} {} invalid in ({mu}): {e}", holes[0], holes[1])))
    };
    let source_holes = match variant {
        TwoHoleVariant::Horizontal => [anchor, Cell::new(i + 1, j)],
        TwoHoleVariant::Vertical => [anchor, Cell::new(i, j + 1)],
    };
    let source = holed(source_holes)?;
    let t1 = holed([anchor, Cell::new(i + k, j + l)])?;
    let t2 = holed([Cell::new(i + k, j), Cell::new(i, j + l)])?;
    let n = source.len();
    let op = match variant {
        TwoHoleVariant::Horizontal => elementary(n, k - 1, Alphabet::X).mul(&power_sum(n, l, Alphabet::Y))?,
        TwoHoleVariant::Vertical => elementary(n, l - 1, Alphabet::Y).mul(&power_sum(n, k, Alphabet::X))?,
    };
    let lhs = apply_operator(&op, &delta(&source)?)?;
    let cs = extract_diagram_coefficients(&lhs, &[t1.clone(), t2.clone()]).map_err(|_| {
        Error::IdentityViolation(format!("two-hole identity leaves a residual for ({mu}) at {anchor}, k={k}, l={l}"))
    })?;
    let relation = SignRelation::of(&cs[0], &cs[1]);
    let flip = row_major_is_even(&t1) != row_major_is_even(&t2);
    let row_major_relation = match (relation, flip) {
        (SignRelation::Same, true) => SignRelation::Opposite,
        (SignRelation::Opposite, true) => SignRelation::Same,
        (r, _) => r,
    };
    Ok(TwoHoleReport {
        source,
        targets: [t1, t2],
        constants: [cs[0].clone(), cs[1].clone()],
        relation,
        row_major_relation,
    })
}
