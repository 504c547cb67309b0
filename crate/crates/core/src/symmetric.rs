//! Power-sum, elementary and complete homogeneous symmetric polynomials in
//! one alphabet, used as differential operators.

use crate::diagrams::k_subsets;
use crate::polycore::{Alphabet, Monomial, Polynomial, Rational};
use num_traits::One;

fn from_exponent_rows(n: usize, a: Alphabet, rows: impl IntoIterator<Item = Vec<u8>>) -> Polynomial {
    let zero = vec![0u8; n];
    let terms = rows.into_iter().map(|e| {
        let m = match a {
            Alphabet::X => Monomial::from_parts(&e, &zero),
            Alphabet::Y => Monomial::from_parts(&zero, &e),
        }
        .expect("equal block lengths");
        (m, Rational::one())
    });
    Polynomial::from_terms(n, terms).expect("arity checked")
}

/// `p_k = Σ_i z_i^k`; `p_0 = n`.
pub fn power_sum(n: usize, k: usize, a: Alphabet) -> Polynomial {
    from_exponent_rows(
        n,
        a,
        (0..n).map(|i| {
            let mut e = vec![0u8; n];
            e[i] = k as u8;
            e
        }),
    )
}

/// `e_k = Σ_{i_1<…<i_k} z_{i_1}⋯z_{i_k}`; `e_0 = 1`, zero for `k > n`.
pub fn elementary(n: usize, k: usize, a: Alphabet) -> Polynomial {
    let idx: Vec<usize> = (0..n).collect();
    from_exponent_rows(
        n,
        a,
        k_subsets(&idx, k).into_iter().map(|s| {
            let mut e = vec![0u8; n];
            for i in s {
                e[i] = 1;
            }
            e
        }),
    )
}

/// `h_k`: the sum of all monomials of degree `k`; `h_0 = 1`.
pub fn complete(n: usize, k: usize, a: Alphabet) -> Polynomial {
    fn rec(i: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i + 1 == cur.len() {
            cur[i] = left as u8;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut rows = Vec::new();
    if n == 0 {
        if k == 0 {
            return Polynomial::one(0);
        }
        return Polynomial::zero(0);
    }
    rec(0, k, &mut vec![0u8; n], &mut rows);
    from_exponent_rows(n, a, rows)
}
