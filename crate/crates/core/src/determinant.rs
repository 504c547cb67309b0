//! Lattice determinants `Δ_D = det(x_i^{p_j} y_i^{q_j})`.
//!
//! Entries are monomials, so the permutation expansion has exactly `n!`
//! distinct terms and nothing cancels. Each monomial of `Δ_D` carries the
//! biexponent multiset `D`, which makes determinants of distinct diagrams
//! disjointly supported and lets coefficients be read off a single probe
//! monomial.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diagrams::{Cell, LatticeDiagram};
use crate::error::{Error, Result};
use crate::polycore::{Monomial, Polynomial, Rational};

/// Permutation-sum expansion; practical up to eight or nine cells.
pub fn delta(d: &LatticeDiagram) -> Result<Polynomial> {
    let n = d.len();
    if n == 0 {
        return Err(Error::Domain("the lattice determinant of an empty diagram is undefined".into()));
    }
    let cells = d.cells();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity((1..=n).product());
    let one = Rational::from_integer(BigInt::from(1));
    let minus = -one.clone();
    let mut push = |perm: &[usize], positive: bool| {
        let mut exps = vec![0u8; 2 * n];
        for (var, &ci) in perm.iter().enumerate() {
            exps[var] = cells[ci].p as u8;
            exps[n + var] = cells[ci].q as u8;
        }
        terms.push((Monomial::from_exps(exps), if positive { one.clone() } else { minus.clone() }));
    };

    // Heap's algorithm; every swap flips the sign.
    let mut positive = true;
    push(&perm, positive);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            positive = !positive;
            push(&perm, positive);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Polynomial::from_terms(n, terms)
}

/// `∏ x_i^{p_i} y_i^{q_i}` with cells in pseudo-lex order: the identity term of `Δ_D`, coefficient `+1`.
pub fn identity_monomial(d: &LatticeDiagram) -> Monomial {
    let x: Vec<u8> = d.cells().iter().map(|c| c.p as u8).collect();
    let y: Vec<u8> = d.cells().iter().map(|c| c.q as u8).collect();
    Monomial::from_parts(&x, &y).expect("equal lengths")
}

/// The biexponent multiset of a monomial, as a diagram, when its cells are distinct.
pub fn diagram_of_monomial(m: &Monomial) -> Option<LatticeDiagram> {
    let cells = m
        .x()
        .iter()
        .zip(m.y())
        .map(|(&p, &q)| Cell::new(p as usize, q as usize));
    LatticeDiagram::new(cells).ok()
}

/// Writes `p = Σ c_D Δ_D` over the given diagrams. Fails with `NotInSpan` if
/// anything is left over after subtracting the probed combination.
pub fn extract_diagram_coefficients(p: &Polynomial, ds: &[LatticeDiagram]) -> Result<Vec<Rational>> {
    let n = p.nvars();
    let mut residual = p.clone();
    let mut out = Vec::with_capacity(ds.len());
    for d in ds {
        if d.len() != n {
            return Err(Error::Arity { left: n, right: d.len() });
        }
        let c = p.coeff(&identity_monomial(d));
        if !c.is_zero() {
            residual.axpy(&-c.clone(), &delta(d)?);
        }
        out.push(c);
    }
    if residual.is_zero() {
        Ok(out)
    } else {
        Err(Error::NotInSpan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{apply_operator, rat};
    use crate::symmetric::power_sum;
    use crate::polycore::Alphabet;

    fn diag(s: &str) -> LatticeDiagram {
        s.parse().unwrap()
    }

    fn poly(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    /// Cofactor expansion along the first row, entries as monomials.
    fn cofactor_det(d: &LatticeDiagram) -> Polynomial {
        fn rec(rows: &[usize], cols: &[Cell], n: usize) -> Polynomial {
            if cols.is_empty() {
                return Polynomial::one(n);
            }
            let var = rows[0];
            let mut acc = Polynomial::zero(n);
            for (j, c) in cols.iter().enumerate() {
                let mut x = vec![0u8; n];
                let mut y = vec![0u8; n];
                x[var] = c.p as u8;
                y[var] = c.q as u8;
                let entry = Polynomial::term(Monomial::from_parts(&x, &y).unwrap(), rat(1));
                let mut rest = cols.to_vec();
                rest.remove(j);
                let minor = rec(&rows[1..], &rest, n);
                let t = entry.mul(&minor).unwrap();
                acc = if j % 2 == 0 { acc.add(&t).unwrap() } else { acc.sub(&t).unwrap() };
            }
            acc
        }
        let n = d.len();
        let rows: Vec<usize> = (0..n).collect();
        rec(&rows, d.cells(), n)
    }

    #[test]
    fn hand_expansions() {
        assert_eq!(delta(&diag("(0,0)")).unwrap(), Polynomial::one(1));
        assert_eq!(delta(&diag("(0,0);(1,0)")).unwrap(), poly("x2 - x1", 2));
        assert_eq!(
            delta(&diag("(0,0);(1,0);(0,1)")).unwrap(),
            poly("x2*y3 - x3*y2 - x1*y3 + x3*y1 + x1*y2 - x2*y1", 3)
        );
        assert!(matches!(delta(&LatticeDiagram::empty()), Err(Error::Domain(_))));
    }

    #[test]
    fn permutation_sum_matches_cofactor_expansion() {
        for s in ["(0,0);(1,0);(0,1);(1,1)", "(0,2);(3,0);(1,1);(0,0)", "(2,0);(0,1);(1,2);(0,0);(1,0)"] {
            let d = diag(s);
            assert_eq!(delta(&d).unwrap(), cofactor_det(&d), "{s}");
        }
    }

    #[test]
    fn antisymmetric_and_supported_on_its_diagram() {
        let d = diag("(0,0);(1,0);(0,1);(2,1)");
        let p = delta(&d).unwrap();
        assert_eq!(p.len(), 24);
        assert_eq!(p.permute_variables(&[1, 0, 2, 3]), p.neg());
        for (m, _) in p.terms() {
            assert_eq!(diagram_of_monomial(m).as_ref(), Some(&d));
        }
        assert_eq!(p.coeff(&identity_monomial(&d)), rat(1));
    }

    #[test]
    fn extraction() {
        let d1 = diag("(0,0);(1,0)");
        let d2 = diag("(0,0);(2,0)");
        let p = delta(&d1).unwrap().scale(&rat(3));
        assert_eq!(extract_diagram_coefficients(&p, std::slice::from_ref(&d1)).unwrap(), vec![rat(3)]);
        let p = poly("2*x2 - 2*x1", 2);
        assert_eq!(
            extract_diagram_coefficients(&p, &[d1.clone(), d2.clone()]).unwrap(),
            vec![rat(2), rat(0)]
        );
        // p_1(∂)(x2^2 - x1^2) = 2 x2 - 2 x1
        let p = apply_operator(&power_sum(2, 1, Alphabet::X), &delta(&d2).unwrap()).unwrap();
        assert_eq!(extract_diagram_coefficients(&p, std::slice::from_ref(&d1)).unwrap(), vec![rat(2)]);
        assert_eq!(
            extract_diagram_coefficients(&poly("x1", 2), &[d1]),
            Err(Error::NotInSpan)
        );
    }
}
