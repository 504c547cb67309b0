//! Lattice diagrams, partitions and holed partitions.
//!
//! A cell `(p, q)` sits in row `p` and column `q`; as a biexponent it stands
//! for `x^p y^q`. Rows are counted upward from the bottom row `0`, so moving a
//! cell "down" lowers `p`.
//!
//! Diagrams keep their cells in pseudo-lexicographic order: by column first,
//! then by row. That order fixes the sign of the lattice determinant.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Cell {
    pub p: usize,
    pub q: usize,
}

impl Cell {
    pub const fn new(p: usize, q: usize) -> Self {
        Cell { p, q }
    }

    /// True if `self` lies weakly north-east of `anchor`.
    pub fn in_shadow_of(&self, anchor: Cell) -> bool {
        self.p >= anchor.p && self.q >= anchor.q
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.p).cmp(&(other.q, other.p))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<(usize, usize)> for Cell {
    fn from((p, q): (usize, usize)) -> Self {
        Cell { p, q }
    }
}

impl From<Cell> for (usize, usize) {
    fn from(c: Cell) -> Self {
        (c.p, c.q)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl FromStr for Cell {
    type Err = Error;

    /// Accepts `(i,j)` or `i,j`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let mut it = t.split(',');
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse(format!("expected a cell \"(i,j)\", got {s:?}")));
        };
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad coordinate {x:?}: {e}")))
        };
        Ok(Cell::new(parse(a)?, parse(b)?))
    }
}

/// Parses a semicolon-separated cell list such as `(0,0);(1,0)`.
pub fn parse_cells(s: &str) -> Result<Vec<Cell>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

pub fn format_cells<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> String {
    cells
        .into_iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

/// A finite set of distinct cells, stored in pseudo-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct LatticeDiagram {
    cells: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    cells: Vec<Cell>,
}

impl TryFrom<RawDiagram> for LatticeDiagram {
    type Error = Error;

    fn try_from(raw: RawDiagram) -> Result<Self> {
        LatticeDiagram::new(raw.cells)
    }
}

impl From<LatticeDiagram> for RawDiagram {
    fn from(d: LatticeDiagram) -> Self {
        RawDiagram { cells: d.cells }
    }
}

impl LatticeDiagram {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCell(w[0]));
        }
        Ok(LatticeDiagram { cells })
    }

    pub fn empty() -> Self {
        LatticeDiagram { cells: Vec::new() }
    }

    /// Cells in pseudo-lexicographic order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Sum of row indices and sum of column indices: the bidegree of the
    /// lattice determinant.
    pub fn weight(&self) -> (usize, usize) {
        self.cells
            .iter()
            .fold((0, 0), |(a, b), c| (a + c.p, b + c.q))
    }

    pub fn transpose(&self) -> LatticeDiagram {
        LatticeDiagram::new(self.cells.iter().map(|c| Cell::new(c.q, c.p)))
            .expect("transpose keeps cells distinct")
    }
}

impl fmt::Display for LatticeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cells(&self.cells))
    }
}

impl FromStr for LatticeDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticeDiagram::new(parse_cells(s)?)
    }
}

/// Sorts a cell list into pseudo-lexicographic order.
pub fn pseudo_lex_order(cells: &[Cell]) -> Vec<Cell> {
    let mut v = cells.to_vec();
    v.sort();
    v
}

/// A weakly decreasing list of positive parts. Part `r` is the length of row `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct Partition {
    parts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    parts: Vec<usize>,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        Partition::new(raw.parts)
    }
}

impl From<Partition> for RawPartition {
    fn from(p: Partition) -> Self {
        RawPartition { parts: p.parts }
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary row lengths into a partition, dropping zeros.
    pub fn from_row_lengths(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut parts: Vec<usize> = lengths.into_iter().filter(|&l| l > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.parts.len()
    }

    pub fn num_cols(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn row_len(&self, r: usize) -> usize {
        self.parts.get(r).copied().unwrap_or(0)
    }

    pub fn col_height(&self, q: usize) -> usize {
        self.parts.iter().take_while(|&&l| l > q).count()
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.q < self.row_len(c.p)
    }

    pub fn conjugate(&self) -> Partition {
        Partition {
            parts: (0..self.num_cols()).map(|q| self.col_height(q)).collect(),
        }
    }

    /// The Ferrers cells `{(r, c) : c < parts[r]}` in pseudo-lex order.
    pub fn cells(&self) -> LatticeDiagram {
        LatticeDiagram::new(
            self.parts
                .iter()
                .enumerate()
                .flat_map(|(r, &len)| (0..len).map(move |c| Cell::new(r, c))),
        )
        .expect("Ferrers cells are distinct")
    }

    fn check_cell(&self, c: Cell) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::InvalidCell(c))
        }
    }

    /// Cells weakly north-east of `c`, in pseudo-lex order.
    pub fn shadow(&self, c: Cell) -> Result<Vec<Cell>> {
        self.check_cell(c)?;
        Ok(self
            .cells()
            .cells()
            .iter()
            .copied()
            .filter(|x| x.in_shadow_of(c))
            .collect())
    }

    pub fn shadow_size(&self, c: Cell) -> Result<usize> {
        self.check_cell(c)?;
        Ok((c.p..self.num_rows())
            .map(|r| self.row_len(r).saturating_sub(c.q))
            .sum())
    }

    /// Shadow cells that end their row.
    pub fn right_edge_cells(&self, c: Cell) -> Result<Vec<Cell>> {
        Ok(self
            .shadow(c)?
            .into_iter()
            .filter(|x| !self.contains(Cell::new(x.p, x.q + 1)))
            .collect())
    }

    pub fn remove_cells(&self, holes: impl IntoIterator<Item = Cell>) -> Result<HoledDiagram> {
        HoledDiagram::new(self.clone(), holes)
    }

    /// `n!/(mu_1! mu_2! ...)`, the number of row-increasing injective fillings.
    pub fn multinomial(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut placed: u128 = 0;
        for &part in &self.parts {
            for t in 1..=part as u128 {
                placed += 1;
                acc = acc * placed / t;
            }
        }
        acc
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Every partition of size `1..=max`, smallest sizes first.
    pub fn up_to(max: usize) -> Vec<Partition> {
        (1..=max).flat_map(Partition::all).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {x:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A partition with some of its cells removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HoledDiagram {
    pub shape: Partition,
    pub holes: BTreeSet<Cell>,
}

impl HoledDiagram {
    pub fn new(shape: Partition, holes: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for h in holes {
            if !shape.contains(h) {
                return Err(Error::InvalidCell(h));
            }
            if !set.insert(h) {
                return Err(Error::DuplicateCell(h));
            }
        }
        Ok(HoledDiagram { shape, holes: set })
    }

    pub fn diagram(&self) -> LatticeDiagram {
        LatticeDiagram::new(
            self.shape
                .cells()
                .cells()
                .iter()
                .copied()
                .filter(|c| !self.holes.contains(c)),
        )
        .expect("subset of distinct cells")
    }

    pub fn num_cells(&self) -> usize {
        self.shape.size() - self.holes.len()
    }

    /// The diagram with every hole pushed to the top of its column.
    pub fn pushed_up(&self) -> LatticeDiagram {
        let cells = (0..self.shape.num_cols()).flat_map(|q| {
            let missing = self.holes.iter().filter(|h| h.q == q).count();
            (0..self.shape.col_height(q) - missing).map(move |p| Cell::new(p, q))
        });
        LatticeDiagram::new(cells).expect("column runs are distinct")
    }
}

impl fmt::Display for HoledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/{{{}}}", self.shape, format_cells(&self.holes))
    }
}

/// All `k`-element subsets of `items`, in lexicographic order of positions.
pub fn k_subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < k - cur.len() {
                break;
            }
            cur.push(items[idx].clone());
            rec(items, k, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(v: &[(usize, usize)]) -> Vec<Cell> {
        v.iter().map(|&c| c.into()).collect()
    }

    fn set(v: &[(usize, usize)]) -> BTreeSet<Cell> {
        v.iter().map(|&c| c.into()).collect()
    }

    #[test]
    fn ferrers_cells() {
        let mu: Partition = "4,2,1".parse().unwrap();
        let got: BTreeSet<Cell> = mu.cells().cells().iter().copied().collect();
        assert_eq!(got, set(&[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)]));
        assert_eq!(Partition::new(vec![1]).unwrap().cells().cells(), cells(&[(0, 0)]));
        let sq: BTreeSet<Cell> = Partition::new(vec![2, 2]).unwrap().cells().cells().iter().copied().collect();
        assert_eq!(sq, set(&[(0, 0), (0, 1), (1, 0), (1, 1)]));
    }

    #[test]
    fn pseudo_lex() {
        let mu = Partition::new(vec![4, 2, 1]).unwrap();
        assert_eq!(
            mu.cells().cells(),
            cells(&[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2), (0, 3)])
        );
        assert_eq!(pseudo_lex_order(&cells(&[(0, 1), (1, 0)])), cells(&[(1, 0), (0, 1)]));
        assert_eq!(pseudo_lex_order(&cells(&[(0, 0)])), cells(&[(0, 0)]));
    }

    #[test]
    fn shadows() {
        let mu = Partition::new(vec![4, 2, 1]).unwrap();
        let sh = mu.shadow(Cell::new(1, 0)).unwrap();
        assert_eq!(sh.iter().copied().collect::<BTreeSet<_>>(), set(&[(1, 0), (1, 1), (2, 0)]));
        assert_eq!(mu.shadow_size(Cell::new(1, 0)).unwrap(), 3);
        assert_eq!(mu.shadow_size(Cell::new(0, 0)).unwrap(), 7);
        assert_eq!(mu.shadow(Cell::new(0, 3)).unwrap(), cells(&[(0, 3)]));
        assert_eq!(mu.shadow(Cell::new(1, 2)), Err(Error::InvalidCell(Cell::new(1, 2))));
    }

    #[test]
    fn removing_cells() {
        let mu = Partition::new(vec![2, 1]).unwrap();
        let d = mu.remove_cells([Cell::new(0, 0)]).unwrap().diagram();
        assert_eq!(d.cells(), cells(&[(1, 0), (0, 1)]));
        let mu32 = Partition::new(vec![3, 2]).unwrap();
        let d = mu32
            .remove_cells(cells(&[(0, 0), (1, 0), (0, 2)]))
            .unwrap()
            .diagram();
        assert_eq!(d.cells(), cells(&[(0, 1), (1, 1)]));
        assert_eq!(mu.remove_cells([]).unwrap().diagram(), mu.cells());
        assert_eq!(
            mu.remove_cells([Cell::new(1, 1)]),
            Err(Error::InvalidCell(Cell::new(1, 1)))
        );
    }

    #[test]
    fn right_edges() {
        let mu = Partition::new(vec![4, 2, 1]).unwrap();
        let re: BTreeSet<Cell> = mu.right_edge_cells(Cell::new(0, 0)).unwrap().into_iter().collect();
        assert_eq!(re, set(&[(0, 3), (1, 1), (2, 0)]));
        let re: BTreeSet<Cell> = Partition::new(vec![2, 1])
            .unwrap()
            .right_edge_cells(Cell::new(0, 0))
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(re, set(&[(0, 1), (1, 0)]));
        let re: BTreeSet<Cell> = Partition::new(vec![2, 2])
            .unwrap()
            .right_edge_cells(Cell::new(0, 0))
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(re, set(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn partition_validation_and_text() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        let mu: Partition = "(3,2)".parse().unwrap();
        assert_eq!(mu.to_string(), "3,2");
        let d: LatticeDiagram = "(0,0);(1,0)".parse().unwrap();
        assert_eq!(d.to_string(), "(0,0);(1,0)");
        assert!("(0,0);(0,0)".parse::<LatticeDiagram>().is_err());
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::up_to(5).len(), 1 + 2 + 3 + 5 + 7);
    }

    #[test]
    fn json_mirror() {
        let mu = Partition::new(vec![4, 2, 1]).unwrap();
        assert_eq!(serde_json::to_string(&mu).unwrap(), r#"{"parts":[4,2,1]}"#);
        let d: LatticeDiagram = serde_json::from_str(r#"{"cells":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(d.cells(), cells(&[(0, 0), (1, 0)]));
        assert!(serde_json::from_str::<Partition>(r#"{"parts":[1,2]}"#).is_err());
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(Partition::new(vec![2, 1]).unwrap().multinomial(), 3);
        assert_eq!(Partition::new(vec![2, 2]).unwrap().multinomial(), 6);
        assert_eq!(Partition::new(vec![1, 1, 1]).unwrap().multinomial(), 6);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(factorial(5), 120);
        assert_eq!(k_subsets(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(k_subsets(&[1, 2], 0), vec![Vec::<i32>::new()]);
    }

    #[test]
    fn pushed_up_is_column_justified() {
        let mu = Partition::new(vec![2, 2]).unwrap();
        let hd = mu.remove_cells([Cell::new(0, 1)]).unwrap();
        assert_eq!(hd.pushed_up(), Partition::new(vec![2, 1]).unwrap().cells());
    }
}
