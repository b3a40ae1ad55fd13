//! Weyl group enumeration, the length function, and Schubert-cell counts
//! via minimal coset representatives.
//!
//! Enumeration is breadth-first on exact matrices, deduplicated by matrix
//! equality, so each element carries a lexicographically minimal reduced
//! word. The cap defaults to 51840 (the largest group we enumerate whole);
//! anything bigger is rejected rather than attempted.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{rat_i64, Rat};
use crate::rootsys::{ParabolicSubset, RootSystem};
use num_traits::One;
use std::collections::HashMap;

pub const DEFAULT_ENUMERATION_CAP: usize = 51840;

/// A Weyl group element: its matrix on the simple-root coordinates together
/// with a reduced word (1-based node indices, shortest and lexicographically
/// minimal among shortest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    matrix: QMatrix,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            matrix: QMatrix::identity(rank),
            word: Vec::new(),
        }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    /// Image of a coordinate vector under this element.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.apply(v)
    }
}

/// Graded dimensions, entry d standing for the piece in (co)homological
/// degree 2d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable(pub Vec<usize>);

impl BettiTable {
    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.0.len();
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i])
    }
}

impl std::fmt::Display for BettiTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Enumerates the subgroup generated by the reflections in `gens` (all nodes
/// gives the whole group). Deterministic order: by length, then by word.
pub fn enumerate_weyl(rs: &RootSystem, gens: &ParabolicSubset) -> Result<Vec<WeylElement>> {
    enumerate_weyl_capped(rs, gens, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_weyl_capped(
    rs: &RootSystem,
    gens: &ParabolicSubset,
    cap: usize,
) -> Result<Vec<WeylElement>> {
    for node in gens.nodes() {
        rs.check_node(node)?;
    }
    let rank = rs.rank();
    let generators: Vec<(usize, QMatrix)> = gens
        .nodes()
        .map(|i| (i, rs.simple_reflection_matrix(i).expect("validated")))
        .collect();

    let identity = WeylElement::identity(rank);
    let mut seen: HashMap<QMatrix, Vec<usize>> = HashMap::new();
    seen.insert(identity.matrix.clone(), Vec::new());
    // frontier kept in word order so first discovery is lexicographically
    // minimal among shortest words
    let mut frontier: Vec<WeylElement> = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for (i, s) in &generators {
                let m = w.matrix.mul(s);
                if !seen.contains_key(&m) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    let mut word = w.word.clone();
                    word.push(*i);
                    seen.insert(m.clone(), word.clone());
                    next.push(WeylElement { matrix: m, word });
                }
            }
        }
        frontier = next;
    }

    let mut out: Vec<WeylElement> = seen
        .into_iter()
        .map(|(matrix, word)| WeylElement { matrix, word })
        .collect();
    out.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    Ok(out)
}

/// Number of positive roots sent to negative roots; equals the reduced word
/// length. Fails when the matrix does not permute the roots.
pub fn length(rs: &RootSystem, w: &WeylElement) -> Result<usize> {
    let mut inversions = 0;
    for root in rs.positive_roots() {
        let v: Vec<Rat> = root.iter().map(|&c| rat_i64(c)).collect();
        let img = w.apply(&v);
        let mut coords = Vec::with_capacity(img.len());
        for x in &img {
            if !x.denom().is_one() {
                return Err(Error::NotAWeylElement);
            }
            coords.push(i64::try_from(x.numer()).map_err(|_| Error::NotAWeylElement)?);
        }
        if rs.is_positive_root(&coords) {
            continue;
        }
        let neg: Vec<i64> = coords.iter().map(|&c| -c).collect();
        if rs.is_positive_root(&neg) {
            inversions += 1;
        } else {
            return Err(Error::NotAWeylElement);
        }
    }
    Ok(inversions)
}

/// True when w sends every simple root defining the subgroup to a positive
/// root, i.e. w is the shortest element of its coset w W_P.
pub fn is_minimal_coset_representative(
    rs: &RootSystem,
    w: &WeylElement,
    p: &ParabolicSubset,
) -> bool {
    p.nodes().all(|i| {
        let mut v = vec![Rat::from_integer(0.into()); rs.rank()];
        v[i - 1] = rat_i64(1);
        let img = w.apply(&v);
        let coords: Vec<i64> = img
            .iter()
            .map(|x| i64::try_from(x.numer()).expect("root coordinate"))
            .collect();
        rs.is_positive_root(&coords)
    })
}

/// Counts minimal coset representatives by length. Entry d of the result is
/// the number of Schubert cells of complex dimension d in the quotient; the
/// table has one entry per degree from 0 to the quotient dimension.
pub fn coset_length_counts(rs: &RootSystem, p: &ParabolicSubset) -> Result<BettiTable> {
    let group = enumerate_weyl(rs, &ParabolicSubset::all(rs.rank()))?;
    let dim = rs.positive_roots_outside(p);
    let mut dims = vec![0usize; dim + 1];
    for w in &group {
        if is_minimal_coset_representative(rs, w, p) {
            let l = w.word_length();
            assert!(
                l <= dim,
                "minimal representative of length {l} exceeds quotient dimension {dim}"
            );
            dims[l] += 1;
        }
    }
    Ok(BettiTable(dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn rs(s: &str) -> crate::rootsys::RootSystem {
        build_root_system(s.parse().unwrap())
    }

    fn full_group(t: &str) -> Vec<WeylElement> {
        let r = rs(t);
        enumerate_weyl(&r, &ParabolicSubset::all(r.rank())).unwrap()
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(full_group("A1").len(), 2);
        // oracle: |S_3| = 3!
        let s3_order: usize = (1..=3).product();
        assert_eq!(full_group("A2").len(), s3_order);
        assert_eq!(full_group("G2").len(), 12);
        assert_eq!(full_group("B2").len(), 8);
    }

    #[test]
    fn f4_order() {
        assert_eq!(full_group("F4").len(), 1152);
    }

    #[test]
    fn identity_comes_first_and_order_is_by_length() {
        let g = full_group("A2");
        assert!(g[0].matrix().is_identity());
        assert!(g[0].word().is_empty());
        for pair in g.windows(2) {
            assert!(
                (pair[0].word_length(), pair[0].word()) <= (pair[1].word_length(), pair[1].word())
            );
        }
    }

    #[test]
    fn cap_rejects_large_groups() {
        let r = rs("A3");
        let all = ParabolicSubset::all(3);
        assert!(matches!(
            enumerate_weyl_capped(&r, &all, 10),
            Err(Error::GroupTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn length_equals_word_length() {
        for t in ["A2", "B2", "A3", "G2"] {
            let r = rs(t);
            for w in full_group(t) {
                assert_eq!(length(&r, &w).unwrap(), w.word_length(), "{t}");
            }
        }
    }

    #[test]
    fn longest_element_length_is_root_count() {
        for (t, expect) in [("A2", 3), ("B2", 4)] {
            let max = full_group(t)
                .iter()
                .map(|w| w.word_length())
                .max()
                .unwrap();
            assert_eq!(max, expect);
        }
    }

    #[test]
    fn identity_has_length_zero() {
        let r = rs("A2");
        assert_eq!(length(&r, &WeylElement::identity(2)).unwrap(), 0);
    }

    #[test]
    fn non_weyl_matrix_detected() {
        let r = rs("A2");
        let fake = WeylElement {
            matrix: QMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]),
            word: vec![],
        };
        assert_eq!(length(&r, &fake), Err(Error::NotAWeylElement));
    }

    #[test]
    fn subgroup_enumeration() {
        let r = rs("A3");
        let p = ParabolicSubset::new([1, 3], 3).unwrap();
        // <s1> x <s3> has order 4
        assert_eq!(enumerate_weyl(&r, &p).unwrap().len(), 4);
        assert_eq!(
            enumerate_weyl(&r, &ParabolicSubset::empty()).unwrap().len(),
            1
        );
    }

    #[test]
    fn coset_counts_borel_a2() {
        // oracle: inversion counts of the 6 permutations of S_3: 1 each of
        // length 0 and 3, 2 each of lengths 1 and 2
        let r = rs("A2");
        let t = coset_length_counts(&r, &ParabolicSubset::empty()).unwrap();
        assert_eq!(t.dims(), &[1, 2, 2, 1]);
    }

    #[test]
    fn coset_counts_grassmannian() {
        // oracle: partitions inside a 2x2 box, bucketed by size
        let r = rs("A3");
        let p = ParabolicSubset::new([1, 3], 3).unwrap();
        let t = coset_length_counts(&r, &p).unwrap();
        assert_eq!(t.dims(), &[1, 1, 2, 1, 1]);
    }

    #[test]
    fn coset_counts_g2_minimal() {
        // oracle: W(G2) length generating function (1+t)(1+t+...+t^5)
        // divided by (1+t)
        let r = rs("G2");
        for node in 1..=2 {
            let p = ParabolicSubset::new([node], 2).unwrap();
            let t = coset_length_counts(&r, &p).unwrap();
            assert_eq!(t.dims(), &[1, 1, 1, 1, 1, 1]);
        }
    }

    #[test]
    fn minimality_matches_brute_force_rank_le_3() {
        for t in ["A1", "A2", "B2", "G2", "A3", "B3", "C3"] {
            let r = rs(t);
            let group = full_group(t);
            let rank = r.rank();
            for mask in 0..(1usize << rank) {
                let p =
                    ParabolicSubset::new((1..=rank).filter(|i| mask & (1 << (i - 1)) != 0), rank)
                        .unwrap();
                let sub = enumerate_weyl(&r, &p).unwrap();
                for w in &group {
                    // brute force: shortest element of the coset w * W_P
                    let coset_min = sub
                        .iter()
                        .map(|u| {
                            let m = w.matrix().mul(u.matrix());
                            group
                                .iter()
                                .find(|g| g.matrix() == &m)
                                .expect("closed")
                                .word_length()
                        })
                        .min()
                        .unwrap();
                    let is_min = coset_min == w.word_length();
                    assert_eq!(
                        is_minimal_coset_representative(&r, w, &p),
                        is_min,
                        "{t} {p} {:?}",
                        w.word()
                    );
                }
            }
        }
    }

    #[test]
    fn coset_tables_palindromic_with_correct_total() {
        for t in ["A1", "A2", "B2", "G2", "A3", "B3"] {
            let r = rs(t);
            let rank = r.rank();
            let order = full_group(t).len();
            for mask in 0..(1usize << rank) {
                let p =
                    ParabolicSubset::new((1..=rank).filter(|i| mask & (1 << (i - 1)) != 0), rank)
                        .unwrap();
                let sub_order = enumerate_weyl(&r, &p).unwrap().len();
                let table = coset_length_counts(&r, &p).unwrap();
                assert!(table.is_palindromic(), "{t} {p}");
                assert_eq!(table.dims()[0], 1, "{t} {p}");
                assert_eq!(table.total(), order / sub_order, "{t} {p}");
            }
        }
    }
}
