//! Multivariate polynomials over exact rationals in the simple-root
//! coordinates, graded monomial bases, and span dimensions.
//!
//! Variables are named a1..ar and stand for the simple roots, so a linear
//! form is a vector in the root space and polynomial degree d corresponds to
//! cohomological degree 2d downstream. The text format written here (`c * a1^e1
//! a2^e2 + ...`) is also what the on-disk basis cache stores.

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::rootsys::RootSystem;
use crate::weyl::WeylElement;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Sparse polynomial: exponent vector -> nonzero rational coefficient.
/// The rank (number of variables) is tracked explicitly so the zero
/// polynomial still knows its ambient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    rank: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Polynomial {
    pub fn zero(rank: usize) -> Self {
        Polynomial {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Polynomial::constant(rank, Rat::one())
    }

    pub fn constant(rank: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    /// The variable a_i (1-based node index) as a polynomial.
    pub fn variable(rank: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= rank);
        let mut e = vec![0u32; rank];
        e[i - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        Polynomial { rank, terms }
    }

    /// Linear form with the given coordinates in the simple-root basis.
    pub fn linear_form(coords: &[Rat]) -> Self {
        let rank = coords.len();
        let mut p = Polynomial::zero(rank);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; rank];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Polynomial::zero(rank);
        for (e, c) in terms {
            assert_eq!(e.len(), rank);
            p.add_term(e, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.rank);
        }
        Polynomial {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.rank, other.rank);
        let mut out = Polynomial::zero(self.rank);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.rank);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by the single variable at the given 0-based position.
    pub fn shift_by_variable(&self, var: usize) -> Polynomial {
        assert!(var < self.rank);
        Polynomial {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] += 1;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// True when every term has total degree d. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Substitutes variable i (0-based) by the given polynomials, i.e.
    /// applies the ring homomorphism a_i -> images[i].
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.rank);
        let out_rank = images.first().map_or(self.rank, Polynomial::rank);
        // memoized powers of each image
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(out_rank), p.clone()]).collect();
        let mut out = Polynomial::zero(out_rank);
        for (e, c) in self.terms() {
            let mut term = Polynomial::constant(out_rank, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let last = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(last);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Text form, `c * a1^e1 a2^e2 + ...`, terms in graded-lex order
    /// (highest first). Inverse of [`Polynomial::parse_text`].
    pub fn to_text(&self) -> String {
        format!("{self}")
    }

    /// Parses the text format. Accepts coefficients `p` or `p/q`, optional
    /// `*`, variables `a1..a<rank>` with optional `^e`.
    pub fn parse_text(s: &str, rank: usize) -> Result<Polynomial> {
        let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad("empty polynomial"));
        }
        if s == "0" {
            return Ok(Polynomial::zero(rank));
        }
        let mut out = Polynomial::zero(rank);
        // split on '+' at top level; '-' signs live inside coefficients
        for chunk in s.split('+') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(bad("empty term"));
            }
            let mut exps = vec![0u32; rank];
            let mut coeff: Option<Rat> = None;
            for factor in chunk.split(['*', ' ']).filter(|f| !f.is_empty()) {
                if let Some(rest) = factor.strip_prefix('a') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let i: usize = var.parse().map_err(|_| bad("bad variable"))?;
                    if i == 0 || i > rank {
                        return Err(bad("variable out of range"));
                    }
                    let e: u32 = exp.parse().map_err(|_| bad("bad exponent"))?;
                    if e > 10_000 {
                        return Err(bad("exponent too large"));
                    }
                    exps[i - 1] = exps[i - 1]
                        .checked_add(e)
                        .ok_or_else(|| bad("exponent overflow"))?;
                } else {
                    let c = parse_rat(factor).ok_or_else(|| bad("bad coefficient"))?;
                    coeff = Some(match coeff {
                        None => c,
                        Some(prev) => prev * c,
                    });
                }
            }
            out.add_term(exps, coeff.unwrap_or_else(Rat::one));
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        // graded-lex, highest degree first, then lexicographically largest
        keys.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            (db, *b).cmp(&(da, *a))
        });
        for (k, e) in keys.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[*e];
            write!(f, "{}", format_rat(c))?;
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, " a{}", i + 1)?;
                } else if p > 1 {
                    write!(f, " a{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

/// All exponent vectors of the given total degree, in graded-lex order with
/// the first variable dominant (so (2,0) precedes (1,1) precedes (0,2)).
pub fn monomial_basis(rank: usize, degree: u32) -> Vec<Vec<u32>> {
    assert!(rank >= 1);
    let mut out = Vec::new();
    let mut current = vec![0u32; rank];
    fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(current.clone());
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            rec(pos + 1, remaining - e, current, out);
        }
        current[pos] = 0;
    }
    rec(0, degree, &mut current, &mut out);
    out
}

/// Column indexing of the degree-d monomials under a permuted graded-lex
/// order: monomials are compared after rearranging exponents by `var_order`
/// (a permutation of 0..rank, highest-priority variable first). Column 0 is
/// the largest monomial; a polynomial's leading term gets the smallest
/// column index.
#[derive(Debug, Clone)]
pub struct MonomialIndex {
    pub degree: u32,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl MonomialIndex {
    pub fn new(rank: usize, degree: u32, var_order: &[usize]) -> Self {
        assert_eq!(var_order.len(), rank);
        let mut exps = monomial_basis(rank, degree);
        exps.sort_by_key(|e| {
            let permuted: Vec<u32> = var_order.iter().map(|&v| e[v]).collect();
            std::cmp::Reverse(permuted)
        });
        let index = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        MonomialIndex {
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn column_of(&self, exps: &[u32]) -> u32 {
        self.index[exps]
    }

    pub fn exponents_of(&self, col: u32) -> &[u32] {
        &self.exps[col as usize]
    }

    /// Sparse coefficient row of a homogeneous polynomial of this degree.
    pub fn row_of(&self, p: &Polynomial) -> SparseRow {
        let mut pairs: Vec<(u32, Rat)> = p
            .terms()
            .map(|(e, c)| (self.column_of(e), c.clone()))
            .collect();
        pairs.sort_by_key(|t| t.0);
        let vals: Vec<Rat> = pairs.iter().map(|(_, v)| v.clone()).collect();
        let ints = integerize(&vals);
        SparseRow::from_int_pairs(pairs.iter().map(|t| t.0).zip(ints).collect())
    }

    /// Reconstructs a polynomial from a rational coefficient vector.
    pub fn poly_of_dense(&self, rank: usize, v: &[Rat]) -> Polynomial {
        Polynomial::from_terms(
            rank,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.exps[i].clone(), c.clone())),
        )
    }
}

fn integerize(vals: &[Rat]) -> Vec<crate::rational::Int> {
    use num_integer::Integer;
    let mut lcm = crate::rational::Int::one();
    for v in vals {
        lcm = lcm.lcm(v.denom());
    }
    vals.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Applies a Weyl element to a polynomial by substituting each simple-root
/// variable with its image linear form. A ring homomorphism; degrees are
/// preserved, and composition follows the group law.
pub fn poly_weyl_action(rs: &RootSystem, w: &WeylElement, p: &Polynomial) -> Result<Polynomial> {
    if p.rank() != rs.rank() {
        return Err(Error::RankMismatch {
            expected: rs.rank(),
            found: p.rank(),
        });
    }
    let images: Vec<Polynomial> = (0..rs.rank())
        .map(|j| Polynomial::linear_form(&w.matrix().column(j)))
        .collect();
    Ok(p.substitute(&images))
}

/// Rank over Q of the coefficient matrix of homogeneous polynomials in the
/// fixed graded-lex monomial basis, by fraction-free row reduction.
pub fn span_dimension(polys: &[Polynomial], degree: u32) -> Result<usize> {
    if polys.is_empty() {
        return Ok(0);
    }
    let rank = polys[0].rank();
    for p in polys {
        if p.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: p.rank(),
            });
        }
        if !p.is_homogeneous_of(degree) {
            return Err(Error::InhomogeneousInput);
        }
    }
    let idx = MonomialIndex::new(rank, degree, &(0..rank).collect::<Vec<_>>());
    Ok(linalg::rank(polys.iter().map(|p| idx.row_of(p))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_i64};
    use crate::rootsys::{build_root_system, ParabolicSubset};
    use crate::weyl::enumerate_weyl;

    fn a2() -> RootSystem {
        build_root_system("A2".parse().unwrap())
    }

    #[test]
    fn monomial_basis_enumeration() {
        assert_eq!(monomial_basis(2, 0), vec![vec![0, 0]]);
        assert_eq!(
            monomial_basis(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(monomial_basis(3, 2).len(), 6);
    }

    #[test]
    fn arithmetic_basics() {
        let a1 = Polynomial::variable(2, 1);
        let a2v = Polynomial::variable(2, 2);
        let p = a1.add(&a2v).pow(2);
        assert_eq!(p.coefficient(&[1, 1]), rat_i64(2));
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_homogeneous_of(2));
        assert!(!p.add(&Polynomial::one(2)).is_homogeneous_of(2));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn span_dimension_examples() {
        assert_eq!(span_dimension(&[], 1).unwrap(), 0);
        let a1 = Polynomial::variable(2, 1);
        assert_eq!(
            span_dimension(&[a1.clone(), a1.scale(&rat_i64(2))], 1).unwrap(),
            1
        );
        // squares a1^2, a2^2, (a1+a2)^2 have coefficient matrix with
        // determinant -2 (hand expansion), hence full rank 3
        let a2v = Polynomial::variable(2, 2);
        let squares = vec![a1.pow(2), a2v.pow(2), a1.add(&a2v).pow(2)];
        assert_eq!(span_dimension(&squares, 2).unwrap(), 3);
        assert!(matches!(
            span_dimension(&[a1], 2),
            Err(Error::InhomogeneousInput)
        ));
    }

    #[test]
    fn weyl_action_on_a2() {
        let rs = a2();
        let group = enumerate_weyl(&rs, &ParabolicSubset::all(2)).unwrap();
        let s1 = group
            .iter()
            .find(|w| w.word() == [1])
            .expect("s1 in the group");
        let a1 = Polynomial::variable(2, 1);
        let a2v = Polynomial::variable(2, 2);
        // s1: a1 -> -a1
        assert_eq!(
            poly_weyl_action(&rs, s1, &a1).unwrap(),
            a1.scale(&rat_i64(-1))
        );
        // invariant quadric is fixed
        let q = a1.pow(2).add(&a1.mul(&a2v)).add(&a2v.pow(2));
        assert_eq!(poly_weyl_action(&rs, s1, &q).unwrap(), q);
        // identity acts trivially
        let id = &group[0];
        assert_eq!(poly_weyl_action(&rs, id, &q).unwrap(), q);
    }

    #[test]
    fn weyl_action_rank_mismatch() {
        let rs = a2();
        let p = Polynomial::variable(3, 1);
        let id = crate::weyl::WeylElement::identity(2);
        assert!(matches!(
            poly_weyl_action(&rs, &id, &p),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let p = Polynomial::from_terms(
            2,
            [
                (vec![2, 0], rat(3, 4)),
                (vec![1, 1], rat(-1, 2)),
                (vec![0, 0], rat_i64(5)),
            ],
        );
        let s = p.to_text();
        assert_eq!(Polynomial::parse_text(&s, 2).unwrap(), p);
        assert_eq!(Polynomial::parse_text("0", 2).unwrap(), Polynomial::zero(2));
        // display is graded-lex, highest first
        assert_eq!(s, "3/4 a1^2 + -1/2 a1 a2 + 5");
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "a0", "a3", "1/0", "a1^^2", "zz", "a1^999999999999"] {
            assert!(
                Polynomial::parse_text(bad, 2).is_err(),
                "{bad:?} should fail"
            );
        }
        // bare monomial without coefficient is accepted
        let p = Polynomial::parse_text("a1^2", 2).unwrap();
        assert_eq!(p.coefficient(&[2, 0]), rat_i64(1));
    }

    #[test]
    fn monomial_index_orders_leading_terms_first() {
        let idx = MonomialIndex::new(2, 2, &[0, 1]);
        assert_eq!(idx.column_of(&[2, 0]), 0);
        assert_eq!(idx.column_of(&[0, 2]), 2);
        // reversed variable priority flips the order
        let idx = MonomialIndex::new(2, 2, &[1, 0]);
        assert_eq!(idx.column_of(&[0, 2]), 0);
        assert_eq!(idx.column_of(&[2, 0]), 2);
    }
}
