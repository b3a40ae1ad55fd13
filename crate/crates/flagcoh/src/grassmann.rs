//! Characteristic-class computations for the flag variety of lines and
//! planes in C^{2n+2}, presented as a projective bundle over P^{2n+1}.
//!
//! The presentation has two degree-one classes: H, the hyperplane class of
//! the base, and D, the relative hyperplane class. The ring is
//! Q[H,D]/(H^{2n+2}, f(H,D)) with f the Chern relation of the twisted
//! cotangent bundle; f is monic in D, so normal forms live on the monomial
//! basis H^i D^j with i <= 2n+1, j <= 2n. Schubert classes of the plane
//! Grassmannian pull back through the two-row Giambelli determinant, and
//! the alternating sum S_{[n,n]} - S_{[n+1,n-1]} + ... is the class killed
//! by D.

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::rational::{format_rat, parse_rat, Int, Rat};
use num_traits::{One, Signed, Zero};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;

// polynomial variables: a1 = H (base hyperplane class), a2 = D (relative)
const D: usize = 2;

fn hd_term(h: u32, d: u32, c: Rat) -> (Vec<u32>, Rat) {
    (vec![h, d], c)
}

/// Two-row partition [a, b] inside the 2 x 2n box of the plane
/// Grassmannian of C^{2n+2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition2 {
    a: u32,
    b: u32,
}

impl Partition2 {
    pub fn new(n: u32, a: u32, b: u32) -> Result<Self> {
        if b > a || a > 2 * n {
            return Err(Error::PartitionOutOfBox { a, b, width: 2 * n });
        }
        Ok(Partition2 { a, b })
    }

    pub fn parts(self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn size(self) -> u32 {
        self.a + self.b
    }
}

/// Integer combination of two-row Schubert classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchubertSum {
    terms: BTreeMap<(u32, u32), i64>,
}

impl SchubertSum {
    pub fn zero() -> Self {
        SchubertSum::default()
    }

    pub fn single(p: Partition2, coef: i64) -> Self {
        let mut s = SchubertSum::zero();
        s.add(p, coef);
        s
    }

    pub fn add(&mut self, p: Partition2, coef: i64) {
        if coef == 0 {
            return;
        }
        let entry = self.terms.entry((p.a, p.b)).or_insert(0);
        *entry += coef;
        if *entry == 0 {
            self.terms.remove(&(p.a, p.b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Partition2, i64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (Partition2 { a, b }, c))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "terms": self
                .terms
                .iter()
                .map(|(&(a, b), &c)| json!({ "a": a, "b": b, "coef": c }))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("malformed Schubert sum".into());
        let mut out = SchubertSum::zero();
        for t in v.get("terms").and_then(|t| t.as_array()).ok_or_else(bad)? {
            let a = t.get("a").and_then(|x| x.as_u64()).ok_or_else(bad)?;
            let b = t.get("b").and_then(|x| x.as_u64()).ok_or_else(bad)?;
            let c = t.get("coef").and_then(|x| x.as_i64()).ok_or_else(bad)?;
            if b > a || a > u64::from(u32::MAX) {
                return Err(bad());
            }
            out.add(
                Partition2 {
                    a: a as u32,
                    b: b as u32,
                },
                c,
            );
        }
        Ok(out)
    }
}

impl fmt::Display for SchubertSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*S[{a},{b}]")?;
        }
        Ok(())
    }
}

/// Element of Q[H,D]/(H^{2n+2}, f) in normal form: exponents of H at most
/// 2n+1 and of D at most 2n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LHElement {
    n: u32,
    coeffs: BTreeMap<(u32, u32), Rat>,
}

impl LHElement {
    pub fn zero(n: u32) -> Self {
        LHElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, h: u32, d: u32) -> Rat {
        self.coeffs.get(&(h, d)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rat)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn neg(&self) -> LHElement {
        LHElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, -v.clone()))
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            2,
            self.coeffs
                .iter()
                .map(|(&(h, d), c)| hd_term(h, d, c.clone())),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "terms": self
                .coeffs
                .iter()
                .map(|(&(h, d), c)| json!({ "h": h, "d": d, "c": format_rat(c) }))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("malformed ring element".into());
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(bad)?;
        if n == 0 || n > 1 << 16 {
            return Err(bad());
        }
        let n = n as u32;
        let mut out = LHElement::zero(n);
        for t in v.get("terms").and_then(|t| t.as_array()).ok_or_else(bad)? {
            let h = t.get("h").and_then(|x| x.as_u64()).ok_or_else(bad)?;
            let d = t.get("d").and_then(|x| x.as_u64()).ok_or_else(bad)?;
            let c = t
                .get("c")
                .and_then(|x| x.as_str())
                .and_then(parse_rat)
                .ok_or_else(bad)?;
            if h > u64::from(2 * n + 1) || d > u64::from(2 * n) {
                return Err(bad());
            }
            if !c.is_zero() {
                let cur = out.coeffs.entry((h as u32, d as u32)).or_insert_with(Rat::zero);
                *cur = cur.clone() + c;
                if cur.is_zero() {
                    out.coeffs.remove(&(h as u32, d as u32));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for LHElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_hd(&self.to_polynomial()))
    }
}

/// Renders a polynomial in H and D, highest D-power first.
pub fn format_hd(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(u32, u32, Rat)> = p
        .terms()
        .map(|(e, c)| (e[0], e[1], c.clone()))
        .collect();
    terms.sort_by_key(|&(h, d, _)| (std::cmp::Reverse(d), h));
    let mut out = String::new();
    for (k, (h, d, c)) in terms.iter().enumerate() {
        if k == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        let mut pieces: Vec<String> = Vec::new();
        if !mag.is_one() || (*h == 0 && *d == 0) {
            pieces.push(format_rat(&mag));
        }
        for (sym, e) in [("H", *h), ("D", *d)] {
            match e {
                0 => {}
                1 => pieces.push(sym.to_string()),
                _ => pieces.push(format!("{sym}^{e}")),
            }
        }
        out.push_str(&pieces.join(" "));
    }
    out
}

/// Total Chern class coefficients of the twisted cotangent bundle of
/// projective m-space: the truncation of (1+h)^{m+1} / (1+2h) to degree m.
/// The top coefficient vanishes exactly when m is odd.
pub fn chern_classes_twisted_cotangent(m: u32) -> Vec<Int> {
    assert!(m >= 1);
    // binomials C(m+1, j)
    let mut binom = vec![Int::one()];
    for j in 1..=m {
        let prev = &binom[j as usize - 1];
        binom.push(prev * Int::from(m + 2 - j) / Int::from(j));
    }
    (0..=m)
        .map(|j| {
            let mut total = Int::zero();
            let mut sign_pow = Int::one(); // (-2)^k
            for k in 0..=j {
                if j - k <= m {
                    total += &binom[(j - k) as usize] * &sign_pow;
                }
                sign_pow *= Int::from(-2);
            }
            total
        })
        .collect()
}

/// The Chern relation f(H,D) = sum_i (-1)^i c_i H^i D^{2n+1-i} of the rank
/// 2n+1 twisted cotangent bundle; homogeneous of degree 2n+1 and monic in D.
pub fn leray_hirsch_relation(n: u32) -> Polynomial {
    assert!(n >= 1);
    let m = 2 * n + 1;
    let c = chern_classes_twisted_cotangent(m);
    Polynomial::from_terms(
        2,
        c.iter().enumerate().map(|(i, ci)| {
            let sign = if i % 2 == 0 { Int::one() } else { -Int::one() };
            hd_term(
                i as u32,
                m - i as u32,
                Rat::from_integer(sign * ci),
            )
        }),
    )
}

/// Exact division of the relation by D, possible because the top Chern
/// class vanishes (the bundle has a nowhere vanishing section).
pub fn factor_relation(n: u32) -> Result<Polynomial> {
    let f = leray_hirsch_relation(n);
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        if e[1] == 0 {
            return Err(Error::NotDivisible);
        }
        terms.push((vec![e[0], e[1] - 1], c.clone()));
    }
    Ok(Polynomial::from_terms(2, terms))
}

/// Normal form in Q[H,D]/(H^{2n+2}, f): monomials with H-exponent beyond
/// 2n+1 die, and D-exponents at or above 2n+1 rewrite through the monic
/// relation.
pub fn ring_reduce(n: u32, p: &Polynomial) -> LHElement {
    assert_eq!(p.rank(), 2);
    let f = leray_hirsch_relation(n);
    let h_max = 2 * n + 1;
    let d_bound = 2 * n + 1;
    let mut work: BTreeMap<(u32, u32), Rat> = p
        .terms()
        .filter(|(e, _)| e[0] <= h_max)
        .map(|(e, c)| ((e[0], e[1]), c.clone()))
        .collect();
    loop {
        // highest D-exponent still above the bound
        let Some((&(h, d), _)) = work
            .iter()
            .filter(|(&(_, d), _)| d >= d_bound)
            .max_by_key(|(&(h, d), _)| (d, h))
        else {
            break;
        };
        let c = work.remove(&(h, d)).unwrap();
        // subtract c * H^h * D^(d - (2n+1)) * f; the leading term cancels
        for (e, fc) in f.terms() {
            let (fh, fd) = (e[0], e[1]);
            if fd == d_bound {
                continue; // cancelled head
            }
            let nh = h + fh;
            let nd = d - d_bound + fd;
            if nh > h_max {
                continue;
            }
            let delta = -(c.clone() * fc);
            let entry = work.entry((nh, nd)).or_insert_with(Rat::zero);
            *entry = entry.clone() + delta;
            if entry.is_zero() {
                work.remove(&(nh, nd));
            }
        }
    }
    work.retain(|_, c| !c.is_zero());
    LHElement { n, coeffs: work }
}

/// Multiplication by the special class sigma_1 under the Pieri rule, inside
/// the 2 x 2n box: S_[a,b] * sigma_1 = S_[a+1,b] + S_[a,b+1], keeping only
/// summands that remain partitions in the box.
pub fn pieri_multiply(n: u32, s: &SchubertSum) -> Result<SchubertSum> {
    let mut out = SchubertSum::zero();
    for (p, c) in s.terms() {
        let (a, b) = p.parts();
        if b > a || a > 2 * n {
            return Err(Error::PartitionOutOfBox { a, b, width: 2 * n });
        }
        if a + 1 <= 2 * n {
            out.add(Partition2 { a: a + 1, b }, c);
        }
        if b + 1 <= a {
            out.add(Partition2 { a, b: b + 1 }, c);
        }
    }
    Ok(out)
}

/// The alternating combination sum_i (-1)^i S_[n+i, n-i], i = 0..n.
pub fn alternating_sum(n: u32) -> SchubertSum {
    let mut s = SchubertSum::zero();
    for i in 0..=n {
        let coef = if i % 2 == 0 { 1 } else { -1 };
        s.add(
            Partition2 {
                a: n + i,
                b: n - i,
            },
            coef,
        );
    }
    s
}

/// True when multiplying the alternating sum by sigma_1 gives zero; this is
/// the cohomological footprint of the special fiber class being annihilated
/// by the relative hyperplane class.
pub fn alternating_sum_annihilated(n: u32) -> bool {
    pieri_multiply(n, &alternating_sum(n))
        .map(|s| s.is_zero())
        .unwrap_or(false)
}

/// Special classes sigma_0..sigma_{2n+1} in the H,D presentation:
/// sigma_1 = D, sigma_{1,1} = DH - H^2, and the two-variable recursion
/// sigma_k = sigma_1 sigma_{k-1} - sigma_{1,1} sigma_{k-2}.
fn special_classes(n: u32) -> Vec<LHElement> {
    let one = ring_reduce(n, &Polynomial::one(2));
    let sigma1 = ring_reduce(n, &Polynomial::variable(2, D));
    let sigma11_poly = Polynomial::from_terms(
        2,
        [
            hd_term(1, 1, Rat::one()),
            hd_term(2, 0, -Rat::one()),
        ],
    );
    let mut sigmas = vec![one, sigma1];
    for _ in 2..=(2 * n + 1) {
        let len = sigmas.len();
        let prev1 = sigmas[len - 1].to_polynomial();
        let prev2 = sigmas[len - 2].to_polynomial();
        let d_poly = Polynomial::variable(2, D);
        let next = d_poly.mul(&prev1).sub(&sigma11_poly.mul(&prev2));
        sigmas.push(ring_reduce(n, &next));
    }
    sigmas
}

/// Pullback of the Schubert class S_lam to the flag variety in the H,D
/// presentation, by the two-row Giambelli determinant
/// S_[a,b] = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}.
pub fn giambelli_pullback(n: u32, lam: Partition2) -> Result<LHElement> {
    let (a, b) = lam.parts();
    if b > a || a > 2 * n {
        return Err(Error::PartitionOutOfBox { a, b, width: 2 * n });
    }
    let sigmas = special_classes(n);
    let main = sigmas[a as usize]
        .to_polynomial()
        .mul(&sigmas[b as usize].to_polynomial());
    let correction = if b >= 1 {
        sigmas[(a + 1) as usize]
            .to_polynomial()
            .mul(&sigmas[(b - 1) as usize].to_polynomial())
    } else {
        Polynomial::zero(2)
    };
    Ok(ring_reduce(n, &main.sub(&correction)))
}

/// Linear extension of the pullback to Schubert sums.
pub fn pullback_sum(n: u32, s: &SchubertSum) -> Result<LHElement> {
    let mut total = Polynomial::zero(2);
    for (p, c) in s.terms() {
        let lh = giambelli_pullback(n, p)?;
        total = total.add(&lh.to_polynomial().scale(&Rat::from_integer(Int::from(c))));
    }
    Ok(ring_reduce(n, &total))
}

/// Matches the reduced factor f0 of the relation against the pullback of
/// the alternating Schubert sum. Exactly one sign works; it is returned.
/// Also checks that f0 * D reduces to zero while f0 itself does not.
pub fn identify_fiber_class(n: u32) -> Result<i8> {
    let f0 = factor_relation(n)?;
    let reduced_f0 = ring_reduce(n, &f0);
    assert!(
        !reduced_f0.is_zero(),
        "the special fiber class is nonzero in the quotient"
    );
    let d_poly = Polynomial::variable(2, D);
    assert!(
        ring_reduce(n, &f0.mul(&d_poly)).is_zero(),
        "f0 * D is the defining relation and must reduce to zero"
    );
    let pulled = pullback_sum(n, &alternating_sum(n))?;
    if reduced_f0 == pulled {
        Ok(1)
    } else if reduced_f0 == pulled.neg() {
        Ok(-1)
    } else {
        Err(Error::ProportionalityFailure)
    }
}

/// Graded dimensions of the normal-form basis H^i D^j, i <= 2n+1, j <= 2n.
pub fn normal_form_dims(n: u32) -> Vec<usize> {
    let top = 4 * n + 1;
    (0..=top)
        .map(|deg| {
            (0..=deg.min(2 * n + 1))
                .filter(|&i| deg - i <= 2 * n)
                .count()
        })
        .collect()
}
