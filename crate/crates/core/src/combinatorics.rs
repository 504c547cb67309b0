//! Tableaux with white cells, circled selections, the shapes `μ_F` and
//! `μ_F^k`, and hole depths.
//!
//! A white cell counts as larger than every entry, so in a row-increasing
//! filling the white cells of a row sit at its right end. Circled cells of a
//! selection follow the same rule: in every row they form a right-justified
//! run inside the shadow. Each selection therefore matches one white-cell
//! pattern, and its tableaux are the row-increasing fillings of `μ_F`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::diagrams::{factorial, Cell, HoledDiagram, Partition};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tableau {
    pub shape: Partition,
    /// `(cell, entry)` pairs in pseudo-lex order of the cells; entries are `1..=n`.
    pub filling: Vec<(Cell, usize)>,
    pub white: BTreeSet<Cell>,
}

impl Tableau {
    pub fn entry(&self, c: Cell) -> Option<usize> {
        self.filling.iter().find(|(d, _)| *d == c).map(|&(_, e)| e)
    }

    /// Row and column of entry `e`.
    pub fn position(&self, e: usize) -> Option<Cell> {
        self.filling.iter().find(|&&(_, v)| v == e).map(|&(c, _)| c)
    }

    /// Rows read left to right, `None` for white cells.
    pub fn rows(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.shape.num_rows())
            .map(|r| (0..self.shape.row_len(r)).map(|q| self.entry(Cell::new(r, q))).collect())
            .collect()
    }

    /// Injective, every non-white cell filled, increasing along rows with whites last.
    pub fn is_valid(&self) -> bool {
        let n = self.shape.size() - self.white.len();
        let entries: BTreeSet<usize> = self.filling.iter().map(|&(_, e)| e).collect();
        if entries.len() != n || self.filling.len() != n || entries.iter().any(|&e| e == 0 || e > n) {
            return false;
        }
        self.rows().iter().all(|row| {
            row.windows(2).all(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => a < b,
                (Some(_), None) | (None, None) => true,
                (None, Some(_)) => false,
            })
        })
    }
}

/// `k` circled cells of the shadow of `anchor`, right-justified in each row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Selection {
    pub shape: Partition,
    pub anchor: Cell,
    pub circled: BTreeSet<Cell>,
}

impl Selection {
    pub fn new(shape: Partition, anchor: Cell, circled: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let circled: BTreeSet<Cell> = circled.into_iter().collect();
        let shadow = shape.shadow(anchor)?;
        for &c in &circled {
            if !shadow.contains(&c) {
                return Err(Error::InvalidCell(c));
            }
            let right = Cell::new(c.p, c.q + 1);
            if shape.contains(right) && !circled.contains(&right) {
                return Err(Error::Precondition(format!("circled cell {c} is not at the end of its row")));
            }
        }
        Ok(Selection { shape, anchor, circled })
    }

    pub fn k(&self) -> usize {
        self.circled.len()
    }

    fn circles_in_row(&self, r: usize) -> usize {
        self.circled.iter().filter(|c| c.p == r).count()
    }
}

/// A weakly increasing list of hole depths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DepthTuple(pub Vec<usize>);

/// `n!/ν!`.
pub fn count_row_increasing(nu: &Partition, n: usize) -> Result<u128> {
    if nu.size() != n {
        return Err(Error::Precondition(format!("|{nu}| = {} but n = {n}", nu.size())));
    }
    Ok(nu.multinomial())
}

fn check_k(mu: &Partition, c: Cell, k: usize) -> Result<usize> {
    let s = mu.shadow_size(c)?;
    if k > s {
        return Err(Error::Domain(format!("k = {k} exceeds the shadow size {s}")));
    }
    Ok(s)
}

/// Every selection of `k` circles, ordered by the number of circles per row (row 0 first, more circles first).
pub fn enum_f(mu: &Partition, c: Cell, k: usize) -> Result<Vec<Selection>> {
    mu.shadow_size(c)?;
    let rows: Vec<usize> = (c.p..mu.num_rows()).filter(|&r| mu.row_len(r) > c.q).collect();
    let caps: Vec<usize> = rows.iter().map(|&r| mu.row_len(r) - c.q).collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; rows.len()];
    fn rec(idx: usize, rem: usize, caps: &[usize], counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == caps.len() {
            if rem == 0 {
                out.push(counts.clone());
            }
            return;
        }
        for w in (0..=caps[idx].min(rem)).rev() {
            counts[idx] = w;
            rec(idx + 1, rem - w, caps, counts, out);
        }
        counts[idx] = 0;
    }
    let mut patterns = Vec::new();
    rec(0, k, &caps, &mut counts, &mut patterns);
    for pat in patterns {
        let circled = rows
            .iter()
            .zip(&pat)
            .flat_map(|(&r, &w)| (mu.row_len(r) - w..mu.row_len(r)).map(move |q| Cell::new(r, q)));
        out.push(Selection::new(mu.clone(), c, circled)?);
    }
    Ok(out)
}

/// Row lengths left after removing the circles, sorted.
pub fn mu_f(sel: &Selection) -> Partition {
    Partition::from_row_lengths(
        (0..sel.shape.num_rows()).map(|r| sel.shape.row_len(r) - sel.circles_in_row(r)),
    )
}

/// `μ_F^k`: the shape `μ` with one hole per circle. A circle at row `a` of
/// column `q` puts its hole at `(i + l, q)`, where `l` counts the rows
/// `a' ∈ [i, a)` whose cell `(a', q+1)` is missing from `μ` or circled.
pub fn mu_f_holes(sel: &Selection) -> Result<HoledDiagram> {
    let mu = &sel.shape;
    let i = sel.anchor.p;
    let candidate = |a: usize, q: usize| {
        let right = Cell::new(a, q + 1);
        !mu.contains(right) || sel.circled.contains(&right)
    };
    let holes: Vec<Cell> = sel
        .circled
        .iter()
        .map(|c| {
            let l = (i..c.p).filter(|&a| candidate(a, c.q)).count();
            Cell::new(i + l, c.q)
        })
        .collect();
    HoledDiagram::new(mu.clone(), holes)
        .map_err(|e| Error::TheoremViolation(format!("hole placement for {:?} failed: {e}", sel.circled)))
}

/// For each hole, the number of non-hole cells above it in its column; sorted.
pub fn depth_tuple(hd: &HoledDiagram) -> DepthTuple {
    let mut d: Vec<usize> = hd
        .holes
        .iter()
        .map(|h| {
            (h.p + 1..hd.shape.col_height(h.q))
                .filter(|&a| !hd.holes.contains(&Cell::new(a, h.q)))
                .count()
        })
        .collect();
    d.sort_unstable();
    DepthTuple(d)
}

/// Every row-increasing filling of the non-white cells, for one white set.
fn fillings(mu: &Partition, white: &BTreeSet<Cell>) -> Vec<Tableau> {
    let rows: Vec<Vec<Cell>> = (0..mu.num_rows())
        .map(|r| (0..mu.row_len(r)).map(|q| Cell::new(r, q)).filter(|c| !white.contains(c)).collect())
        .collect();
    let n: usize = rows.iter().map(Vec::len).sum();
    let mut out = Vec::new();
    // Assign entries 1..=n in turn to the leftmost free cell of some row.
    fn rec(
        e: usize,
        n: usize,
        rows: &[Vec<Cell>],
        next: &mut Vec<usize>,
        cur: &mut Vec<(Cell, usize)>,
        out: &mut Vec<Vec<(Cell, usize)>>,
    ) {
        if e > n {
            out.push(cur.clone());
            return;
        }
        for r in 0..rows.len() {
            if next[r] < rows[r].len() {
                cur.push((rows[r][next[r]], e));
                next[r] += 1;
                rec(e + 1, n, rows, next, cur, out);
                next[r] -= 1;
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(1, n, &rows, &mut vec![0; rows.len()], &mut Vec::new(), &mut raw);
    for mut f in raw {
        f.sort();
        out.push(Tableau { shape: mu.clone(), filling: f, white: white.clone() });
    }
    out
}

/// All tableaux of `T^k_{i,j}`, grouped by white set in `enum_f` order.
pub fn enum_t(mu: &Partition, c: Cell, k: usize) -> Result<Vec<Tableau>> {
    check_k(mu, c, k)?;
    Ok(enum_f(mu, c, k)?.iter().flat_map(|sel| fillings(mu, &sel.circled)).collect())
}

/// `#T^k_{i,j}` without listing the tableaux.
pub fn count_t(mu: &Partition, c: Cell, k: usize) -> Result<u128> {
    check_k(mu, c, k)?;
    let n = mu.size() - k;
    Ok(enum_f(mu, c, k)?
        .iter()
        .map(|sel| {
            let rows = (0..mu.num_rows()).map(|r| mu.row_len(r) - sel.circles_in_row(r));
            factorial(n) / rows.map(factorial).product::<u128>()
        })
        .sum())
}

/// `Σ_F n!/μ_F! = #T`, both sides enumerated.
pub fn counting_identity(mu: &Partition, c: Cell, k: usize) -> Result<bool> {
    let n = mu.size().checked_sub(k).ok_or_else(|| Error::Domain("k exceeds |mu|".into()))?;
    let lhs: u128 = enum_f(mu, c, k)?
        .iter()
        .map(|sel| count_row_increasing(&mu_f(sel), n))
        .sum::<Result<u128>>()?;
    Ok(lhs == enum_t(mu, c, k)?.len() as u128)
}

/// Selections grouped by depth tuple; the lemma asks every group to have one member.
pub fn depth_classes(mu: &Partition, c: Cell, k: usize) -> Result<BTreeMap<DepthTuple, Vec<Selection>>> {
    let mut out: BTreeMap<DepthTuple, Vec<Selection>> = BTreeMap::new();
    for sel in enum_f(mu, c, k)? {
        out.entry(depth_tuple(&mu_f_holes(&sel)?)).or_default().push(sel);
    }
    Ok(out)
}

pub fn depth_tuples_distinct(mu: &Partition, c: Cell, k: usize) -> Result<bool> {
    Ok(depth_classes(mu, c, k)?.values().all(|v| v.len() == 1))
}
