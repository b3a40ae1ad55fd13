//! Graded pieces of reflection-invariant polynomial subalgebras.
//!
//! Invariance under a subgroup is decided from its generators alone: a
//! polynomial is fixed by the subgroup generated by reflections s_i iff it
//! is fixed by each s_i, so the degree-d invariants are the joint kernel of
//! the stacked maps (s_i - 1) on the degree-d coefficient space. Cost is
//! therefore independent of the group order.

use crate::error::Result;
use crate::linalg::{kernel_basis, SparseRow};
use crate::polyalg::{MonomialIndex, Polynomial};
use crate::rational::Rat;
use crate::rootsys::{ParabolicSubset, RootSystem};
use num_traits::Zero;
use std::collections::HashMap;

/// Homogeneous basis of some subspace of the degree-d graded piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: u32,
    pub basis: Vec<Polynomial>,
}

impl GradedBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Substitution of variables by fixed polynomials, with memoized powers so
/// a whole monomial basis can be pushed through cheaply.
pub(crate) struct LinearSubstitution {
    images: Vec<Polynomial>,
    powers: Vec<Vec<Polynomial>>,
    out_rank: usize,
}

impl LinearSubstitution {
    pub(crate) fn new(images: Vec<Polynomial>) -> Self {
        let out_rank = images.first().map_or(0, Polynomial::rank);
        let powers = images
            .iter()
            .map(|p| vec![Polynomial::one(out_rank), p.clone()])
            .collect();
        LinearSubstitution {
            images,
            powers,
            out_rank,
        }
    }

    /// Image of the monomial with the given exponents.
    pub(crate) fn monomial(&mut self, exps: &[u32]) -> Polynomial {
        let mut out = Polynomial::one(self.out_rank);
        for (i, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while self.powers[i].len() <= k as usize {
                let next = self.powers[i].last().unwrap().mul(&self.images[i]);
                self.powers[i].push(next);
            }
            out = out.mul(&self.powers[i][k as usize]);
        }
        out
    }

    pub(crate) fn apply(&mut self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.out_rank);
        for (e, c) in p.terms() {
            out = out.add(&self.monomial(e).scale(c));
        }
        out
    }
}

/// Joint fixed space of a list of substitutions on the degree-d piece in
/// `rank` variables. Each entry of `generator_images` gives the variable
/// images under one generator. Computed as the joint kernel of the maps
/// (s - 1), intersecting one generator at a time so later kernels act on an
/// already-small space. The result is a deterministic primitive integer
/// basis in echelon form, ordered by leading monomial.
pub(crate) fn reflection_fixed_space(
    generator_images: &[Vec<Polynomial>],
    rank: usize,
    degree: u32,
) -> Vec<Polynomial> {
    let idx = MonomialIndex::new(rank, degree, &(0..rank).collect::<Vec<_>>());
    let ncols = idx.len();
    let mut current: Vec<Polynomial> = (0..ncols as u32)
        .map(|col| {
            Polynomial::from_terms(
                rank,
                [(idx.exponents_of(col).to_vec(), Rat::from_integer(1.into()))],
            )
        })
        .collect();
    for images in generator_images {
        if current.is_empty() {
            break;
        }
        let mut sub = LinearSubstitution::new(images.clone());
        // constraint matrix over the coefficients of the current basis:
        // rows indexed by monomials, columns by current basis members
        let mut constraint_rows: HashMap<u32, Vec<(u32, Rat)>> = HashMap::new();
        for (j, b) in current.iter().enumerate() {
            let diff = sub.apply(b).sub(b);
            for (e, c) in diff.terms() {
                constraint_rows
                    .entry(idx.column_of(e))
                    .or_default()
                    .push((j as u32, c.clone()));
            }
        }
        let width = current.len();
        let rows: Vec<SparseRow> = constraint_rows
            .into_values()
            .map(|pairs| {
                let mut dense = vec![Rat::zero(); width];
                for (c, x) in pairs {
                    dense[c as usize] = dense[c as usize].clone() + x;
                }
                crate::linalg::dense_to_sparse(&dense)
            })
            .filter(|r| !r.is_empty())
            .collect();
        let kern = kernel_basis(rows, width);
        current = kern
            .iter()
            .map(|coeffs| {
                let mut out = Polynomial::zero(rank);
                for (c, b) in coeffs.iter().zip(&current) {
                    if !c.is_zero() {
                        out = out.add(&b.scale(c));
                    }
                }
                out
            })
            .collect();
    }
    // echelonize for distinct leading monomials and a canonical basis
    let mut sb = crate::linalg::SpanBuilder::new();
    for p in &current {
        sb.insert(idx.row_of(p));
    }
    sb.basis_rows()
        .map(|row| {
            let dense_pairs: Vec<(Vec<u32>, Rat)> = row
                .iter_terms()
                .map(|(col, c)| (idx.exponents_of(col).to_vec(), Rat::from_integer(c)))
                .collect();
            Polynomial::from_terms(rank, dense_pairs)
        })
        .collect()
}

fn simple_reflection_images(rs: &RootSystem, node: usize) -> Vec<Polynomial> {
    let m = rs
        .simple_reflection_matrix(node)
        .expect("node validated by caller");
    (0..rs.rank())
        .map(|j| Polynomial::linear_form(&m.column(j)))
        .collect()
}

/// Basis of the degree-d polynomials fixed by every reflection in `gens`.
/// With `gens` empty this is the full degree-d piece.
pub fn invariant_subspace(rs: &RootSystem, gens: &ParabolicSubset, degree: u32) -> GradedBasis {
    let rank = rs.rank();
    let images: Vec<Vec<Polynomial>> = gens
        .nodes()
        .map(|i| simple_reflection_images(rs, i))
        .collect();
    let basis = reflection_fixed_space(&images, rank, degree);
    GradedBasis { degree, basis }
}

/// Fixed-space bases of the whole reflection group, degrees 0 through the
/// Coxeter number. Degrees above the Coxeter number carry no new algebra
/// generators (the fundamental invariants of a rank-r reflection group have
/// degrees at most the Coxeter number), which is what the quotient engine
/// relies on.
#[derive(Debug, Clone)]
pub struct WholeGroupInvariants {
    pub by_degree: Vec<Vec<Polynomial>>,
    /// per degree, a complement of the decomposable invariants (products of
    /// lower positive degrees) inside the full fixed space; the ideal
    /// generated by all positive-degree invariants is already generated by
    /// these blocks
    pub generator_blocks: Vec<Vec<Polynomial>>,
}

impl WholeGroupInvariants {
    pub fn compute(rs: &RootSystem) -> Self {
        Self::compute_with(rs, |rs, gens, degree| invariant_subspace(rs, gens, degree))
    }

    /// Variant with a pluggable basis source, e.g. the disk cache.
    pub fn compute_with(
        rs: &RootSystem,
        source: impl Fn(&RootSystem, &ParabolicSubset, u32) -> GradedBasis,
    ) -> Self {
        let all = ParabolicSubset::all(rs.rank());
        let rank = rs.rank();
        let h = rs.coxeter_number() as u32;
        let by_degree: Vec<Vec<Polynomial>> = (0..=h)
            .map(|e| source(rs, &all, e).basis)
            .collect();
        assert!(
            by_degree[1].is_empty(),
            "semisimple types admit no linear invariants"
        );
        assert_eq!(
            by_degree[2].len(),
            1,
            "a simple type has a unique invariant quadric up to scale"
        );
        let mut generator_blocks: Vec<Vec<Polynomial>> = vec![Vec::new(); by_degree.len()];
        for e in 2..by_degree.len() {
            let idx = MonomialIndex::new(rank, e as u32, &(0..rank).collect::<Vec<_>>());
            let mut decomposables = crate::linalg::SpanBuilder::new();
            for a in 2..=(e - 2) {
                for f in &by_degree[a] {
                    for g in &by_degree[e - a] {
                        decomposables.insert(idx.row_of(&f.mul(g)));
                    }
                }
            }
            for b in &by_degree[e] {
                if decomposables.insert(idx.row_of(b)) {
                    generator_blocks[e].push(b.clone());
                }
            }
        }
        WholeGroupInvariants {
            by_degree,
            generator_blocks,
        }
    }

    /// The primitive integral invariant quadric, normalized so its quadratic
    /// form is positive definite.
    pub fn invariant_quadric(&self, rank: usize) -> Polynomial {
        let q = self.by_degree[2][0].clone();
        let mut e = vec![0u32; rank];
        e[0] = 2;
        if q.coefficient(&e) < Rat::zero() {
            q.scale(&Rat::from_integer((-1).into()))
        } else {
            q
        }
    }
}

/// Invariants of the sub-reflection-group generated by the given nodes,
/// acting on the span of their simple roots only (coordinates = those
/// simple roots, ascending). The sub-Cartan matrix is the submatrix of the
/// ambient one, so reducible subsets need no special treatment.
pub(crate) fn sub_invariant_basis(
    cartan: &[Vec<i64>],
    pnodes0: &[usize],
    degree: u32,
) -> Vec<Polynomial> {
    let p = pnodes0.len();
    assert!(p >= 1);
    let images: Vec<Vec<Polynomial>> = (0..p)
        .map(|t| {
            (0..p)
                .map(|u| {
                    let mut coords = vec![Rat::zero(); p];
                    coords[u] = Rat::from_integer(1.into());
                    coords[t] = coords[t].clone()
                        - Rat::from_integer(cartan[pnodes0[t]][pnodes0[u]].into());
                    Polynomial::linear_form(&coords)
                })
                .collect()
        })
        .collect();
    reflection_fixed_space(&images, p, degree)
}

/// Degree-d dimension of the ideal generated by the positive-degree
/// whole-group invariants inside the subgroup-invariant algebra.
pub fn ideal_graded_dimension(rs: &RootSystem, p: &ParabolicSubset, degree: u32) -> Result<usize> {
    for node in p.nodes() {
        rs.check_node(node)?;
    }
    let whole = WholeGroupInvariants::compute(rs);
    let mut engine = crate::engine::QuotientEngine::new(rs, p.clone(), &whole);
    Ok(engine.ideal_dim(degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::span_dimension;
    use crate::rational::rat_i64;
    use crate::rootsys::build_root_system;

    fn rs(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap())
    }

    #[test]
    fn a2_full_group_invariants() {
        let r = rs("A2");
        let all = ParabolicSubset::all(2);
        assert_eq!(invariant_subspace(&r, &all, 1).dimension(), 0);
        let deg2 = invariant_subspace(&r, &all, 2);
        assert_eq!(deg2.dimension(), 1);
        // oracle: the 2x3 kernel system solved by hand gives
        // a1^2 + a1 a2 + a2^2
        let a1 = Polynomial::variable(2, 1);
        let a2v = Polynomial::variable(2, 2);
        let q = a1.pow(2).add(&a1.mul(&a2v)).add(&a2v.pow(2));
        assert_eq!(deg2.basis[0], q);
    }

    #[test]
    fn a2_single_reflection_fixed_line() {
        let r = rs("A2");
        let gens = ParabolicSubset::new([1], 2).unwrap();
        let deg1 = invariant_subspace(&r, &gens, 1);
        assert_eq!(deg1.dimension(), 1);
        // s1-fixed line is the gram-orthogonal complement of alpha_1
        let a1 = Polynomial::variable(2, 1);
        let a2v = Polynomial::variable(2, 2);
        let expect = a1.add(&a2v.scale(&rat_i64(2)));
        assert_eq!(deg1.basis[0], expect);
        let coords = vec![rat_i64(1), rat_i64(2)];
        let alpha1 = vec![rat_i64(1), rat_i64(0)];
        assert!(r.gram_pairing(&alpha1, &coords).is_zero());
    }

    #[test]
    fn empty_generator_set_gives_full_space() {
        let r = rs("A2");
        let g = invariant_subspace(&r, &ParabolicSubset::empty(), 3);
        assert_eq!(g.dimension(), 4);
    }

    #[test]
    fn whole_group_invariants_have_classical_dimensions() {
        // generating-function coefficients of prod 1/(1-t^{d_i}) for the
        // fundamental degrees {2,3} of the rank-2 symmetric group action
        let r = rs("A2");
        let w = WholeGroupInvariants::compute(&r);
        let dims: Vec<usize> = w.by_degree.iter().map(Vec::len).collect();
        assert_eq!(dims, vec![1, 0, 1, 1]);
        let b2 = WholeGroupInvariants::compute(&rs("B2"));
        let dims: Vec<usize> = b2.by_degree.iter().map(Vec::len).collect();
        // degrees {2,4}: 1, 0, 1, 0, 2
        assert_eq!(dims, vec![1, 0, 1, 0, 2]);
    }

    #[test]
    fn g2_invariant_degrees() {
        let w = WholeGroupInvariants::compute(&rs("G2"));
        let dims: Vec<usize> = w.by_degree.iter().map(Vec::len).collect();
        // degrees {2,6}: dims of S^W in degrees 0..6
        assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 2]);
    }

    #[test]
    fn invariants_are_actually_fixed() {
        for t in ["A2", "B2", "G2", "A3"] {
            let r = rs(t);
            let all = ParabolicSubset::all(r.rank());
            let group = crate::weyl::enumerate_weyl(&r, &all).unwrap();
            for d in 0..=4u32 {
                for b in &invariant_subspace(&r, &all, d).basis {
                    for w in group.iter().take(6) {
                        assert_eq!(
                            &crate::polyalg::poly_weyl_action(&r, w, b).unwrap(),
                            b,
                            "{t} degree {d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn whole_group_invariants_inside_subgroup_invariants() {
        // monotonicity: W-invariants are W_P-invariant for every subset
        let r = rs("B2");
        for d in 2..=4u32 {
            let w_basis = invariant_subspace(&r, &ParabolicSubset::all(2), d).basis;
            for mask in 0..4usize {
                let p = ParabolicSubset::new(
                    (1..=2).filter(|i| mask & (1 << (i - 1)) != 0),
                    2,
                )
                .unwrap();
                let p_basis = invariant_subspace(&r, &p, d).basis;
                let p_dim = p_basis.len();
                let mut union = p_basis;
                union.extend(w_basis.iter().cloned());
                assert_eq!(span_dimension(&union, d).unwrap(), p_dim);
            }
        }
    }

    #[test]
    fn minimal_parabolic_hilbert_spot_check() {
        // dim of the degree-d invariants of a single reflection equals
        // sum_{2j<=d} C(d-2j+r-2, r-2)
        fn binom(n: u32, k: u32) -> usize {
            let mut out = 1usize;
            for i in 0..k {
                out = out * (n - i) as usize / (i + 1) as usize;
            }
            out
        }
        for t in ["A2", "A3", "B3", "G2"] {
            let r = rs(t);
            let rank = r.rank() as u32;
            for node in 1..=r.rank() {
                let p = ParabolicSubset::new([node], r.rank()).unwrap();
                for d in 0..=5u32 {
                    let expect: usize = (0..=d / 2)
                        .map(|j| binom(d - 2 * j + rank - 2, rank - 2))
                        .sum();
                    assert_eq!(
                        invariant_subspace(&r, &p, d).dimension(),
                        expect,
                        "{t} node {node} degree {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn reynolds_average_lands_in_invariant_span() {
        // averaging over the enumerated group projects onto the invariants
        let r = rs("B2");
        let all = ParabolicSubset::all(2);
        let group = crate::weyl::enumerate_weyl(&r, &all).unwrap();
        let a1 = Polynomial::variable(2, 1);
        let a2v = Polynomial::variable(2, 2);
        for d in 2..=4u32 {
            let p = a1.pow(d).add(&a1.pow(d - 1).mul(&a2v).scale(&rat_i64(3)));
            let mut avg = Polynomial::zero(2);
            for w in &group {
                avg = avg.add(&crate::polyalg::poly_weyl_action(&r, w, &p).unwrap());
            }
            let inv = invariant_subspace(&r, &all, d);
            let dim = inv.dimension();
            if avg.is_zero() {
                continue;
            }
            let mut union = inv.basis;
            union.push(avg);
            assert_eq!(span_dimension(&union, d).unwrap(), dim, "degree {d}");
        }
    }

    #[test]
    fn ideal_dimension_small_cases() {
        let a1 = rs("A1");
        let empty = ParabolicSubset::empty();
        assert_eq!(ideal_graded_dimension(&a1, &empty, 0).unwrap(), 0);
        assert_eq!(ideal_graded_dimension(&a1, &empty, 1).unwrap(), 0);
        assert_eq!(ideal_graded_dimension(&a1, &empty, 2).unwrap(), 1);
        let a2 = rs("A2");
        assert_eq!(ideal_graded_dimension(&a2, &empty, 2).unwrap(), 1);
        assert_eq!(ideal_graded_dimension(&a2, &empty, 0).unwrap(), 0);
        assert_eq!(ideal_graded_dimension(&a2, &empty, 1).unwrap(), 0);
    }

    #[test]
    fn sub_invariants_match_direct_computation() {
        // invariants of the A1 x A1 subgroup inside A3, restricted to the
        // span of nodes 1 and 3: even exponents in each variable
        let r = rs("A3");
        let basis = sub_invariant_basis(r.cartan_matrix(), &[0, 2], 4);
        assert_eq!(basis.len(), 3); // y1^4, y1^2 y2^2, y2^4
        for b in &basis {
            for (e, _) in b.terms() {
                assert!(e.iter().all(|&x| x % 2 == 0));
            }
        }
        assert!(sub_invariant_basis(r.cartan_matrix(), &[0, 2], 3).is_empty());
    }
}
