use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector in N^n.
///
/// The `Ord` implementation is the degree-lexicographic order: alpha < beta
/// iff the tuple (|alpha|, alpha_1, ..., alpha_n) is lexicographically
/// smaller. It is a total, multiplicative, degree-compatible order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Exact quotient other / self; `None` if not divisible.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// All monomials in `n` variables of total degree exactly `d`, in deglex
    /// ascending order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(cur: &mut Vec<u32>, i: usize, rem: u32, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = rem;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=rem {
                cur[i] = e;
                rec(cur, i + 1, rem - e, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(&mut cur, 0, d, &mut out);
        out.sort();
        out
    }

    /// All monomials of total degree <= k, in deglex ascending order.
    pub fn all_up_to_degree(n: usize, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=k {
            out.extend(Monomial::all_of_degree(n, d));
        }
        out
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len(), "monomial length mismatch");
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Fallible deglex comparison with an explicit length check.
pub fn deglex_compare(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.0.len() != b.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "monomials of lengths {} and {}",
            a.0.len(),
            b.0.len()
        )));
    }
    Ok(a.cmp(b))
}

/// Term order used by the Groebner-basis engine.
///
/// `DegLex` compares plain deglex (leading term = deglex-largest).
/// `Block { eliminated }` puts the given variable indices in a leading block
/// compared first by deglex, so that the trailing (kept) variables form an
/// elimination ideal in any Groebner basis for this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermOrder {
    DegLex,
    Block { eliminated: Vec<usize> },
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::DegLex => a.cmp(b),
            TermOrder::Block { eliminated } => {
                let proj = |m: &Monomial| -> (u32, Vec<u32>) {
                    let v: Vec<u32> = eliminated.iter().map(|&i| m.0[i]).collect();
                    (v.iter().sum(), v)
                };
                proj(a).cmp(&proj(b)).then_with(|| a.cmp(b))
            }
        }
    }

    /// Does the monomial touch the eliminated block?
    pub fn in_eliminated_block(&self, m: &Monomial) -> bool {
        match self {
            TermOrder::DegLex => false,
            TermOrder::Block { eliminated } => eliminated.iter().any(|&i| m.0[i] > 0),
        }
    }
}
