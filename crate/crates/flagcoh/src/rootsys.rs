//! Root systems of the simple types A-G: Cartan data, positive roots,
//! simple reflections, and the reflection-invariant bilinear form.
//!
//! All vectors live in the simple-root basis, so root coordinates are
//! integers and the simple root alpha_i is the i-th unit vector. The Cartan
//! convention is a[i][j] = 2(alpha_i, alpha_j)/(alpha_i, alpha_i), with the
//! reflection s_i(alpha_j) = alpha_j - a[i][j] alpha_i; the invariance test
//! S^T G S = G pins this against the transposed alternative.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{rat_i64, Rat};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A simple Lie type, e.g. A2 or F4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidCartanType(format!(
                "{}{rank}",
                family.letter()
            )))
        }
    }

    /// Number of positive roots, by the classical count.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Cartan matrix a[i][j] = 2(alpha_i, alpha_j)/(alpha_i, alpha_i),
    /// 0-indexed, Bourbaki node numbering.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => {
                for i in 0..n - 1 {
                    link(i, i + 1, -1, -1);
                }
            }
            Family::B => {
                // last simple root short: a[n-1][n-2] = -2
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 2, n - 1, -1, -2);
            }
            Family::C => {
                // last simple root long: a[n-2][n-1] = -2
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 2, n - 1, -2, -1);
            }
            Family::D => {
                // chain on nodes 1..n-1, fork node n attached to node n-2
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 3, n - 1, -1, -1);
            }
            Family::E => {
                // chain 1-3-4-5-6(-7(-8)), node 2 attached to node 4
                let chain: &[usize] = match n {
                    6 => &[0, 2, 3, 4, 5],
                    7 => &[0, 2, 3, 4, 5, 6],
                    _ => &[0, 2, 3, 4, 5, 6, 7],
                };
                for w in chain.windows(2) {
                    link(w[0], w[1], -1, -1);
                }
                link(1, 3, -1, -1);
            }
            Family::F => {
                // nodes 1,2 long; 3,4 short
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            Family::G => {
                // node 1 short, node 2 long
                link(0, 1, -3, -1);
            }
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::InvalidCartanType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(err()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || digits.len() > 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let rank: usize = digits.parse().map_err(|_| err())?;
        CartanType::new(family, rank)
    }
}

/// Subset of simple-root nodes (1-based) whose reflections generate a
/// parabolic Weyl subgroup. Empty set = Borel case.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParabolicSubset {
    nodes: BTreeSet<usize>,
}

impl ParabolicSubset {
    pub fn new(nodes: impl IntoIterator<Item = usize>, rank: usize) -> Result<Self> {
        let nodes: BTreeSet<usize> = nodes.into_iter().collect();
        for &node in &nodes {
            if node == 0 || node > rank {
                return Err(Error::NodeOutOfRange { node, rank });
            }
        }
        Ok(ParabolicSubset { nodes })
    }

    /// Parses a comma-separated 1-based node list, e.g. "1,3". Empty or
    /// all-whitespace input is the empty (Borel) subset.
    pub fn parse_list(s: &str, rank: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ParabolicSubset::empty());
        }
        let mut nodes = Vec::new();
        for part in s.split(',') {
            let node: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid node {part:?} in node list")))?;
            nodes.push(node);
        }
        ParabolicSubset::new(nodes, rank)
    }

    pub fn empty() -> Self {
        ParabolicSubset {
            nodes: BTreeSet::new(),
        }
    }

    pub fn all(rank: usize) -> Self {
        ParabolicSubset {
            nodes: (1..=rank).collect(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().copied()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.contains(&node)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, node) in self.nodes.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{node}")?;
        }
        write!(f, "}}")
    }
}

/// A simple root system: Cartan matrix, positive roots in simple-root
/// coordinates, reflection matrices, and the invariant form.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
    gram: QMatrix,
    positive_roots: Vec<Vec<i64>>,
    reflections: Vec<QMatrix>,
}

/// Constructs the root system of a simple type: positive roots by reflection
/// closure from the simple roots, symmetrizers by propagation along the
/// Dynkin diagram, gram = diag(d) * cartan.
pub fn build_root_system(ct: CartanType) -> RootSystem {
    let n = ct.rank;
    let cartan = ct.cartan_matrix();

    // Propagate d_j / d_i = a[i][j] / a[j][i] along edges, then scale to the
    // minimal positive integer vector.
    let mut d = vec![Rat::zero(); n];
    d[0] = rat_i64(1);
    let mut todo = vec![0usize];
    while let Some(i) = todo.pop() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_zero() {
                d[j] = d[i].clone() * rat_i64(cartan[i][j]) / rat_i64(cartan[j][i]);
                todo.push(j);
            }
        }
    }
    let d = crate::rational::primitive_integer_vector(&d)
        .expect("symmetrizers are nonzero on a connected diagram");
    let symmetrizers: Vec<i64> = d.iter().map(|x| i64::try_from(x).unwrap()).collect();

    let gram = QMatrix::from_rows(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rat_i64(symmetrizers[i] * cartan[i][j]))
                    .collect()
            })
            .collect(),
    );

    let reflections: Vec<QMatrix> = (0..n)
        .map(|i| {
            let mut m = QMatrix::identity(n);
            for j in 0..n {
                let cur = m.get(i, j).clone();
                m.set(i, j, cur - rat_i64(cartan[i][j]));
            }
            m
        })
        .collect();

    // Reflection closure over all roots, keeping the nonnegative ones.
    let simple_roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(j == i)).collect())
        .collect();
    let mut all: BTreeSet<Vec<i64>> = simple_roots.iter().cloned().collect();
    let mut frontier: Vec<Vec<i64>> = simple_roots;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..n {
                let mut w = v.clone();
                let s: i64 = (0..n).map(|j| cartan[i][j] * v[j]).sum();
                w[i] -= s;
                if all.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Vec<i64>> = all
        .iter()
        .filter(|v| v.iter().all(|&c| c >= 0))
        .cloned()
        .collect();
    positive_roots.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));

    assert_eq!(
        positive_roots.len(),
        ct.positive_root_count(),
        "reflection closure of {ct} must yield the classical root count"
    );
    assert_eq!(all.len(), 2 * positive_roots.len());

    RootSystem {
        cartan_type: ct,
        cartan,
        symmetrizers,
        gram,
        positive_roots,
        reflections,
    }
}

impl RootSystem {
    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    /// Positive roots in simple-root coordinates, sorted by height then
    /// lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn is_positive_root(&self, v: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r == v)
    }

    /// Matrix of s_i on the simple-root coordinates. Nodes are 1-based.
    pub fn simple_reflection_matrix(&self, node: usize) -> Result<QMatrix> {
        self.check_node(node)?;
        Ok(self.reflections[node - 1].clone())
    }

    /// The invariant symmetric form: gram[i][j] = d_i * a[i][j]. Symmetric,
    /// positive definite, and preserved by every simple reflection.
    pub fn invariant_gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Inner product of coordinate vectors under the invariant form.
    pub fn gram_pairing(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let gv = self.gram.apply(v);
        u.iter()
            .zip(&gv)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// Number of positive roots outside the span of the subset's simple
    /// roots; this is the complex dimension of the associated quotient.
    pub fn positive_roots_outside(&self, p: &ParabolicSubset) -> usize {
        self.positive_roots
            .iter()
            .filter(|v| {
                !v.iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || p.contains(j + 1))
            })
            .count()
    }

    /// Coxeter number 2|positive roots| / rank; also the largest degree of a
    /// fundamental invariant of the reflection group.
    pub fn coxeter_number(&self) -> usize {
        2 * self.positive_roots.len() / self.rank()
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.rank() {
            Err(Error::NodeOutOfRange {
                node,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_to_sparse, kernel_basis};
    use crate::rational::rat;

    fn rs(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap())
    }

    #[test]
    fn parse_cartan_types() {
        assert_eq!(
            "a2".parse::<CartanType>().unwrap(),
            CartanType::new(Family::A, 2).unwrap()
        );
        assert_eq!("F4".parse::<CartanType>().unwrap().rank, 4);
        for bad in ["Z9", "B1", "C2", "D3", "E5", "E9", "F5", "G3", "A0", "", "A", "A2x"] {
            assert!(bad.parse::<CartanType>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn a1_single_root() {
        let r = rs("A1");
        assert_eq!(r.positive_roots(), &[vec![1]]);
        let s = r.simple_reflection_matrix(1).unwrap();
        assert_eq!(s, QMatrix::from_i64_rows(&[vec![-1]]));
    }

    #[test]
    fn a2_reflection_closure_by_hand() {
        // closure from {(1,0),(0,1)}: s_1(0,1) = (1,1), then stable
        let r = rs("A2");
        let expect = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(r.positive_roots().len(), 3);
        for v in &expect {
            assert!(r.is_positive_root(v));
        }
    }

    #[test]
    fn a2_simple_reflection_images() {
        let r = rs("A2");
        let s1 = r.simple_reflection_matrix(1).unwrap();
        // alpha_1 -> -alpha_1, alpha_2 -> alpha_1 + alpha_2
        assert_eq!(s1.column(0), vec![rat(-1, 1), rat(0, 1)]);
        assert_eq!(s1.column(1), vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn g2_six_roots_heights_one_to_five() {
        let r = rs("G2");
        assert_eq!(r.positive_roots().len(), 6);
        let heights: Vec<i64> = r
            .positive_roots()
            .iter()
            .map(|v| v.iter().sum())
            .collect();
        assert_eq!(heights, vec![1, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn classical_root_counts() {
        for (t, count) in [
            ("A3", 6),
            ("A4", 10),
            ("B2", 4),
            ("B3", 9),
            ("B4", 16),
            ("C3", 9),
            ("C4", 16),
            ("D4", 12),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
        ] {
            assert_eq!(rs(t).positive_roots().len(), count, "{t}");
        }
    }

    #[test]
    fn reflections_are_involutions_and_preserve_gram() {
        for t in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let r = rs(t);
            let g = r.invariant_gram();
            for i in 1..=r.rank() {
                let s = r.simple_reflection_matrix(i).unwrap();
                assert!(s.mul(&s).is_identity(), "{t} s_{i} squared");
                assert_eq!(&s.transpose().mul(g).mul(&s), g, "{t} s_{i} invariance");
            }
        }
    }

    #[test]
    fn transposed_convention_breaks_invariance() {
        // with the same gram, reflections built from the transposed Cartan
        // matrix fail S^T G S = G for B2
        let r = rs("B2");
        let g = r.invariant_gram();
        let a = r.cartan_matrix();
        let mut s1 = QMatrix::identity(2);
        for j in 0..2 {
            let cur = s1.get(0, j).clone();
            s1.set(0, j, cur - rat_i64(a[j][0]));
        }
        assert_ne!(&s1.transpose().mul(g).mul(&s1), g);
    }

    #[test]
    fn reflections_permute_signed_roots() {
        for t in ["A2", "B2", "B3", "G2", "F4"] {
            let r = rs(t);
            for i in 1..=r.rank() {
                let s = r.simple_reflection_matrix(i).unwrap();
                for root in r.positive_roots() {
                    let v: Vec<Rat> = root.iter().map(|&c| rat_i64(c)).collect();
                    let img = s.apply(&v);
                    let as_i64: Vec<i64> = img
                        .iter()
                        .map(|x| {
                            assert!(num_traits::One::is_one(x.denom()));
                            i64::try_from(x.numer()).unwrap()
                        })
                        .collect();
                    let neg: Vec<i64> = as_i64.iter().map(|c| -c).collect();
                    assert!(
                        r.is_positive_root(&as_i64) || r.is_positive_root(&neg),
                        "{t}: s_{i} image of {root:?} is not a root"
                    );
                }
            }
        }
    }

    #[test]
    fn gram_matches_hand_values() {
        assert_eq!(
            rs("A2").invariant_gram(),
            &QMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]])
        );
        assert_eq!(rs("A1").invariant_gram(), &QMatrix::from_i64_rows(&[vec![2]]));
    }

    #[test]
    fn b2_gram_solves_invariance_system() {
        // oracle: solve S_i^T G S_i = G for symmetric G = (g11 g12; g12 g22)
        // as a linear system in (g11, g12, g22); the solution space is a
        // line, and our gram must be a positive multiple of its integral
        // generator.
        let r = rs("B2");
        let mut rows = Vec::new();
        for i in 1..=2 {
            let s = r.simple_reflection_matrix(i).unwrap();
            // entries of S^T G S - G, expanded over the three unknowns
            for (p, q) in [(0, 0), (0, 1), (1, 1)] {
                let coeff = |a: usize, b: usize| {
                    // coefficient of g_{ab} (a<=b) in (S^T G S)_{pq}
                    let direct = s.get(a, p).clone() * s.get(b, q).clone();
                    if a == b {
                        direct
                    } else {
                        direct + s.get(b, p).clone() * s.get(a, q).clone()
                    }
                };
                let mut v = vec![coeff(0, 0), coeff(0, 1), coeff(1, 1)];
                let unit = |k: usize| if k == 0 { rat_i64(1) } else { rat_i64(0) };
                // subtract G itself
                let sub = match (p, q) {
                    (0, 0) => [unit(0), unit(1), unit(1)],
                    (0, 1) => [unit(1), unit(0), unit(1)],
                    _ => [unit(1), unit(1), unit(0)],
                };
                for (x, s) in v.iter_mut().zip(sub) {
                    *x = x.clone() - s;
                }
                rows.push(dense_to_sparse(&v));
            }
        }
        let kern = kernel_basis(rows, 3);
        assert_eq!(kern.len(), 1, "invariant symmetric forms are a line");
        let gen = crate::rational::primitive_integer_vector(&kern[0]).unwrap();
        // integral generator with positive diagonal
        let gen: Vec<i64> = gen.iter().map(|x| i64::try_from(x).unwrap()).collect();
        let gen = if gen[0] < 0 {
            gen.iter().map(|&x| -x).collect::<Vec<_>>()
        } else {
            gen
        };
        let ours = r.invariant_gram();
        let ratio = ours.get(0, 0).clone() / rat_i64(gen[0]);
        assert!(ratio > Rat::zero());
        assert_eq!(ours.get(0, 1), &(rat_i64(gen[1]) * ratio.clone()));
        assert_eq!(ours.get(1, 1), &(rat_i64(gen[2]) * ratio));
    }

    #[test]
    fn a2_highest_root_gram_orthogonality() {
        let r = rs("A2");
        let theta = vec![rat_i64(1), rat_i64(1)];
        let diff = vec![rat_i64(1), rat_i64(-1)];
        assert!(r.gram_pairing(&theta, &diff).is_zero());
    }

    #[test]
    fn parabolic_subset_validation() {
        assert!(ParabolicSubset::new([1, 3], 3).is_ok());
        assert!(ParabolicSubset::new([], 2).is_ok());
        assert!(matches!(
            ParabolicSubset::new([0], 2),
            Err(Error::NodeOutOfRange { .. })
        ));
        assert!(ParabolicSubset::new([4], 3).is_err());
    }

    #[test]
    fn roots_outside_subset_span() {
        let r = rs("A3");
        assert_eq!(r.positive_roots_outside(&ParabolicSubset::empty()), 6);
        let p = ParabolicSubset::new([1, 3], 3).unwrap();
        assert_eq!(r.positive_roots_outside(&p), 4);
        assert_eq!(r.positive_roots_outside(&ParabolicSubset::all(3)), 0);
    }

    #[test]
    fn coxeter_numbers() {
        for (t, h) in [("A2", 3), ("A4", 5), ("B4", 8), ("D4", 6), ("G2", 6), ("F4", 12)] {
            assert_eq!(rs(t).coxeter_number(), h, "{t}");
        }
    }
}
