//! Exact linear algebra over the rationals.
//!
//! Rows are sparse integer vectors with coprime entries; elimination is
//! fraction-free (cross-multiply, then strip the content), which avoids the
//! coefficient blow-up of naive rational pivoting. Rows carry machine
//! integers while they fit and escalate to big integers on overflow, so the
//! common case costs no allocations. The incremental [`SpanBuilder`] is the
//! workhorse behind every dimension count in the crate: rows go in one at a
//! time and the builder reports whether the span grew.

use crate::rational::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Sparse integer vector: (column, coefficient) pairs sorted by column.
/// Small rows hold machine integers; Big rows arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparseRow {
    Small(Vec<(u32, i64)>),
    Big(Vec<(u32, Int)>),
}

impl SparseRow {
    pub fn empty() -> Self {
        SparseRow::Small(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SparseRow::Small(v) => v.is_empty(),
            SparseRow::Big(v) => v.is_empty(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SparseRow::Small(v) => v.len(),
            SparseRow::Big(v) => v.len(),
        }
    }

    pub fn lead(&self) -> Option<u32> {
        match self {
            SparseRow::Small(v) => v.first().map(|t| t.0),
            SparseRow::Big(v) => v.first().map(|t| t.0),
        }
    }

    pub fn get(&self, col: u32) -> Option<Int> {
        match self {
            SparseRow::Small(v) => v
                .binary_search_by_key(&col, |t| t.0)
                .ok()
                .map(|i| Int::from(v[i].1)),
            SparseRow::Big(v) => v.binary_search_by_key(&col, |t| t.0).ok().map(|i| v[i].1.clone()),
        }
    }

    pub fn iter_terms(&self) -> Box<dyn Iterator<Item = (u32, Int)> + '_> {
        match self {
            SparseRow::Small(v) => Box::new(v.iter().map(|&(c, x)| (c, Int::from(x)))),
            SparseRow::Big(v) => Box::new(v.iter().map(|(c, x)| (*c, x.clone()))),
        }
    }

    pub fn from_int_pairs(pairs: Vec<(u32, Int)>) -> Self {
        if pairs
            .iter()
            .all(|(_, x)| x.to_i64().map_or(false, |v| v.abs() < SMALL_LIMIT))
        {
            SparseRow::Small(pairs.into_iter().map(|(c, x)| (c, x.to_i64().unwrap())).collect())
        } else {
            SparseRow::Big(pairs)
        }
    }

    fn to_big(&self) -> Vec<(u32, Int)> {
        match self {
            SparseRow::Small(v) => v.iter().map(|&(c, x)| (c, Int::from(x))).collect(),
            SparseRow::Big(v) => v.clone(),
        }
    }

    /// Divides by the content and makes the leading entry positive.
    pub fn normalize(&mut self) {
        match self {
            SparseRow::Small(v) => {
                if v.is_empty() {
                    return;
                }
                let mut g: i64 = 0;
                for (_, c) in v.iter() {
                    g = gcd_i64(g, *c);
                    if g == 1 {
                        break;
                    }
                }
                let sign = if v[0].1 < 0 { -1 } else { 1 };
                let g = g * sign;
                if g != 1 {
                    for (_, c) in v.iter_mut() {
                        *c /= g;
                    }
                }
            }
            SparseRow::Big(v) => {
                if v.is_empty() {
                    return;
                }
                let mut g = Int::zero();
                for (_, c) in v.iter() {
                    g = g.gcd(c);
                    if g.is_one() {
                        break;
                    }
                }
                let negate = v[0].1.is_negative();
                if !g.is_one() || negate {
                    for (_, c) in v.iter_mut() {
                        *c = &*c / &g;
                        if negate {
                            *c = -c.clone();
                        }
                    }
                }
                // demote when entries have shrunk back to machine size
                if v.iter().all(|(_, x)| x.to_i64().map_or(false, |t| t.abs() < SMALL_LIMIT)) {
                    let small = v.iter().map(|(c, x)| (*c, x.to_i64().unwrap())).collect();
                    *self = SparseRow::Small(small);
                }
            }
        }
    }
}

/// Entries above this escalate a row to big integers. Kept well below
/// i64::MAX so a single fraction-free step fits in i128.
const SMALL_LIMIT: i64 = 1 << 62;

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn dense_to_sparse(v: &[Rat]) -> SparseRow {
    let pairs: Vec<(u32, Int)> = {
        let nonzero: Vec<Rat> = v.iter().filter(|x| !x.is_zero()).cloned().collect();
        let ints = integerize_rats(&nonzero);
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, _)| j as u32)
            .zip(ints)
            .collect()
    };
    let mut row = SparseRow::from_int_pairs(pairs);
    row.normalize();
    row
}

/// Clears denominators across a slice of rationals.
fn integerize_rats(vals: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in vals {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    vals.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// r <- lead(b)*r - lead(r)*b, scaled down by the gcd of the two leads.
/// Both rows must share the same leading column; the result's lead is
/// strictly larger (or the row vanishes).
fn eliminate_lead(r: &SparseRow, b: &SparseRow) -> SparseRow {
    debug_assert_eq!(r.lead(), b.lead());
    if let (SparseRow::Small(rv), SparseRow::Small(bv)) = (r, b) {
        if let Some(out) = eliminate_small(rv, bv) {
            return out;
        }
    }
    let rv = r.to_big();
    let bv = b.to_big();
    let g = rv[0].1.gcd(&bv[0].1);
    let rm = &bv[0].1 / &g;
    let bm = &rv[0].1 / &g;
    let mut out = Vec::with_capacity(rv.len() + bv.len());
    let (mut i, mut j) = (1, 1);
    while i < rv.len() || j < bv.len() {
        if j >= bv.len() || (i < rv.len() && rv[i].0 < bv[j].0) {
            out.push((rv[i].0, &rv[i].1 * &rm));
            i += 1;
        } else if i >= rv.len() || bv[j].0 < rv[i].0 {
            out.push((bv[j].0, -(&bv[j].1 * &bm)));
            j += 1;
        } else {
            let c = &rv[i].1 * &rm - &bv[j].1 * &bm;
            if !c.is_zero() {
                out.push((rv[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    SparseRow::Big(out)
}

/// Machine-integer path; None when any intermediate would overflow.
fn eliminate_small(rv: &[(u32, i64)], bv: &[(u32, i64)]) -> Option<SparseRow> {
    let g = gcd_i64(rv[0].1, bv[0].1);
    let rm = (bv[0].1 / g) as i128;
    let bm = (rv[0].1 / g) as i128;
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(rv.len() + bv.len());
    let (mut i, mut j) = (1, 1);
    let limit = SMALL_LIMIT as i128;
    while i < rv.len() || j < bv.len() {
        let (col, c) = if j >= bv.len() || (i < rv.len() && rv[i].0 < bv[j].0) {
            let t = (rv[i].0, rv[i].1 as i128 * rm);
            i += 1;
            t
        } else if i >= rv.len() || bv[j].0 < rv[i].0 {
            let t = (bv[j].0, -(bv[j].1 as i128 * bm));
            j += 1;
            t
        } else {
            let t = (rv[i].0, rv[i].1 as i128 * rm - bv[j].1 as i128 * bm);
            i += 1;
            j += 1;
            t
        };
        if c != 0 {
            if c.abs() >= limit {
                return None;
            }
            out.push((col, c as i64));
        }
    }
    Some(SparseRow::Small(out))
}

/// Small exact fraction for the dense accumulator; den > 0 and reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frac64 {
    num: i64,
    den: i64,
}

impl Frac64 {
    const ZERO: Frac64 = Frac64 { num: 0, den: 1 };

    fn from_i64(n: i64) -> Self {
        Frac64 { num: n, den: 1 }
    }

    fn is_zero(self) -> bool {
        self.num == 0
    }

    fn make(num: i128, den: i128) -> Option<Frac64> {
        debug_assert!(den > 0);
        // fast path: skip the gcd while the values stay comfortably small;
        // reduction happens once they grow
        if num.unsigned_abs() < (1 << 40) && den < (1 << 40) {
            return Some(Frac64 {
                num: num as i64,
                den: den as i64,
            });
        }
        let g = gcd_i128(num, den);
        let (n, d) = (num / g, den / g);
        if n.unsigned_abs() < (1 << 62) && d < (1 << 62) {
            Some(Frac64 {
                num: n as i64,
                den: d as i64,
            })
        } else {
            None
        }
    }

    /// self - f * x, escalating to None on overflow.
    fn sub_mul(self, f: Frac64, x: i64) -> Option<Frac64> {
        let num = self.num as i128 * f.den as i128
            - f.num as i128 * x as i128 * self.den as i128;
        let den = self.den as i128 * f.den as i128;
        Frac64::make(num, den)
    }

    /// self / x for integer x != 0.
    fn div_i64(self, x: i64) -> Option<Frac64> {
        let (num, den) = if x < 0 {
            (-(self.num as i128), self.den as i128 * (-(x as i128)))
        } else {
            (self.num as i128, self.den as i128 * x as i128)
        };
        Frac64::make(num, den)
    }

    fn to_rat(self) -> Rat {
        Rat::new(Int::from(self.num), Int::from(self.den))
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    if a == 0 {
        return if b == 0 { 1 } else { b as i128 };
    }
    if b == 0 {
        return a as i128;
    }
    // binary gcd
    let shift = (a | b).trailing_zeros();
    let mut a = a >> a.trailing_zeros();
    let mut b = b >> b.trailing_zeros();
    while a != b {
        if a > b {
            a -= b;
            a >>= a.trailing_zeros();
        } else {
            b -= a;
            b >>= b.trailing_zeros();
        }
    }
    (a << shift) as i128
}

/// Dense accumulator reused across insertions; escalates to exact rationals
/// on machine overflow.
#[derive(Debug, Clone, Default)]
struct Scratch {
    small: Vec<Frac64>,
    big: Vec<Rat>,
    using_big: bool,
}

impl Scratch {
    /// Grows the buffers; does not touch the big/small state, since this is
    /// also called mid-sweep when a basis row extends past the current edge.
    fn ensure(&mut self, ncols: usize) {
        if self.small.len() < ncols {
            self.small.resize(ncols, Frac64::ZERO);
        }
        if self.big.len() < ncols {
            self.big.resize(ncols, Rat::zero());
        }
    }

    fn escalate(&mut self, touched: &[u32]) {
        if self.using_big {
            return;
        }
        // `touched` may list a column twice; the big side is all zeros
        // here, so only move genuinely nonzero values
        for &c in touched {
            if !self.small[c as usize].is_zero() {
                self.big[c as usize] = self.small[c as usize].to_rat();
                self.small[c as usize] = Frac64::ZERO;
            }
        }
        self.using_big = true;
    }

    fn clear(&mut self, touched: &[u32]) {
        for &c in touched {
            self.small[c as usize] = Frac64::ZERO;
            if self.using_big {
                self.big[c as usize] = Rat::zero();
            }
        }
    }
}

/// Incremental row echelon over Q. Basis rows are primitive integer vectors
/// keyed by their leading column. Insertion runs a sparse triangular sweep
/// over a dense scratch accumulator, dividing by pivots instead of
/// cross-multiplying, so entries stay at their natural scale. The column
/// order is whatever the caller encoded into the indices (smaller index =
/// eliminated first).
#[derive(Debug, Clone, Default)]
pub struct SpanBuilder {
    rows: BTreeMap<u32, SparseRow>,
    /// leads of rows stored as fully-swept remainders; these are kept
    /// mutually reduced so repeated sweeps cannot compound entry growth
    reduced: std::collections::HashSet<u32>,
    scratch: Scratch,
}

impl SpanBuilder {
    pub fn new() -> Self {
        SpanBuilder::default()
    }

    /// Fully reduces `row` against the basis without storing anything,
    /// returning the canonical remainder (no entries at pivot columns).
    pub fn remainder(&mut self, row: SparseRow) -> SparseRow {
        match self.sweep(row, false) {
            None => SparseRow::empty(),
            Some((_, _, remainder)) => {
                let dense: Vec<Rat> = remainder.iter().map(|(_, v)| v.clone()).collect();
                let ints = integerize_rats(&dense);
                let mut out =
                    SparseRow::from_int_pairs(remainder.iter().map(|t| t.0).zip(ints).collect());
                out.normalize();
                out
            }
        }
    }

    /// Reduces `row` against the basis; stores the remainder if nonzero.
    /// Returns true when the span grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let Some((pivot, untouched, remainder)) = self.sweep(row, true) else {
            return false;
        };
        let dense: Vec<Rat> = remainder.iter().map(|(_, v)| v.clone()).collect();
        let ints = integerize_rats(&dense);
        let mut new_row =
            SparseRow::from_int_pairs(remainder.iter().map(|t| t.0).zip(ints).collect());
        new_row.normalize();
        if !untouched {
            // keep the reduced rows mutually reduced: clear the new pivot
            // from every other reduced row that mentions it
            let holders: Vec<u32> = self
                .reduced
                .iter()
                .copied()
                .filter(|l| self.rows[l].get(pivot).is_some())
                .collect();
            for lead in holders {
                let mut b = self.rows.remove(&lead).unwrap();
                b = eliminate_col(&b, &new_row, pivot);
                b.normalize();
                debug_assert_eq!(b.lead(), Some(lead));
                self.rows.insert(lead, b);
            }
            self.reduced.insert(pivot);
        }
        self.rows.insert(pivot, new_row);
        true
    }

    /// Shared sweep. Returns None when the row reduces to zero; otherwise
    /// (fresh pivot, whether no elimination happened, remainder pairs).
    /// With `early_break` a row whose own lead is already fresh is returned
    /// as-is.
    fn sweep(
        &mut self,
        row: SparseRow,
        early_break: bool,
    ) -> Option<(u32, bool, Vec<(u32, Rat)>)> {
        let Some(first) = row.lead() else {
            return None;
        };
        let mut scratch = std::mem::take(&mut self.scratch);
        let mut max_col = match &row {
            SparseRow::Small(v) => v.last().map(|t| t.0).unwrap_or(0),
            SparseRow::Big(v) => v.last().map(|t| t.0).unwrap_or(0),
        };
        scratch.using_big = false;
        scratch.ensure(max_col as usize + 1);
        let mut touched: Vec<u32> = Vec::new();
        match &row {
            SparseRow::Small(v) => {
                for &(c, x) in v {
                    scratch.small[c as usize] = Frac64::from_i64(x);
                    touched.push(c);
                }
            }
            SparseRow::Big(v) => {
                scratch.using_big = true;
                for (c, x) in v {
                    scratch.big[*c as usize] = Rat::from_integer(x.clone());
                    touched.push(*c);
                }
            }
        }

        // sparse triangular sweep, left to right: a pivot hit subtracts a
        // multiple of the stored row, which only touches columns to the
        // right. A row that hits no pivot at all is stored as-is; once any
        // elimination has happened the sweep runs to the end so the stored
        // remainder is fully reduced and its entries stay small.
        let mut fresh: Option<u32> = None;
        let mut untouched = true;
        let mut col = first;
        while col <= max_col {
            let zero = if scratch.using_big {
                scratch.big[col as usize].is_zero()
            } else {
                scratch.small[col as usize].is_zero()
            };
            if zero {
                col += 1;
                continue;
            }
            let Some(basis) = self.rows.get(&col) else {
                if fresh.is_none() {
                    fresh = Some(col);
                    if untouched && early_break {
                        break;
                    }
                }
                col += 1;
                continue;
            };
            untouched = false;
            let basis_max = match basis {
                SparseRow::Small(v) => v.last().map(|t| t.0).unwrap_or(0),
                SparseRow::Big(v) => v.last().map(|t| t.0).unwrap_or(0),
            };
            if basis_max > max_col {
                scratch.ensure(basis_max as usize + 1);
                max_col = basis_max;
            }
            // factor = value / lead(basis)
            if !scratch.using_big {
                // compute all updates first and commit only on success, so
                // an overflow escalation sees an uncorrupted accumulator
                let updates = (|| -> Option<Vec<(u32, Frac64)>> {
                    let SparseRow::Small(bv) = basis else {
                        return None;
                    };
                    let factor = scratch.small[col as usize].div_i64(bv[0].1)?;
                    let mut updates = Vec::with_capacity(bv.len());
                    for &(c, x) in &bv[1..] {
                        let cur = scratch.small[c as usize];
                        updates.push((c, cur.sub_mul(factor, x)?));
                    }
                    Some(updates)
                })();
                match updates {
                    Some(updates) => {
                        scratch.small[col as usize] = Frac64::ZERO;
                        for (c, v) in updates {
                            scratch.small[c as usize] = v;
                            touched.push(c);
                        }
                        col += 1;
                        continue;
                    }
                    None => {
                        // overflow or big basis row: escalate, redo column
                        scratch.escalate(&touched);
                        continue;
                    }
                }
            }
            let lead_val = match basis {
                SparseRow::Small(bv) => Rat::from_integer(Int::from(bv[0].1)),
                SparseRow::Big(bv) => Rat::from_integer(bv[0].1.clone()),
            };
            let factor = scratch.big[col as usize].clone() / lead_val;
            scratch.big[col as usize] = Rat::zero();
            for (c, x) in basis.iter_terms().skip(1) {
                let cur = scratch.big[c as usize].clone();
                scratch.big[c as usize] = cur - &factor * Rat::from_integer(x);
                touched.push(c);
            }
            col += 1;
        }

        let Some(pivot) = fresh else {
            scratch.clear(&touched);
            self.scratch = scratch;
            return None;
        };
        // collect the remainder from the fresh pivot onward (raw row when
        // the sweep never eliminated, fully reduced otherwise)
        let mut remainder: Vec<(u32, Rat)> = Vec::new();
        for c in pivot..=max_col {
            let val = if scratch.using_big {
                scratch.big[c as usize].clone()
            } else {
                scratch.small[c as usize].to_rat()
            };
            if !val.is_zero() {
                remainder.push((c, val));
            }
        }
        scratch.clear(&touched);
        self.scratch = scratch;
        Some((pivot, untouched, remainder))
    }

    /// Membership test without mutation.
    pub fn contains(&self, row: &SparseRow) -> bool {
        let mut row = row.clone();
        loop {
            let Some(lead) = row.lead() else {
                return true;
            };
            match self.rows.get(&lead) {
                None => return false,
                Some(b) => {
                    row = eliminate_lead(&row, b);
                    row.normalize();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn leading_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut sb = SpanBuilder::new();
    for row in rows {
        sb.insert(row);
    }
    sb.dim()
}

/// Basis of the right kernel {x : M x = 0} of the matrix whose rows are
/// given. Output vectors are rational, one per free column, ordered by free
/// column index.
pub fn kernel_basis(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Rat>> {
    let mut sb = SpanBuilder::new();
    for row in rows {
        sb.insert(row);
    }
    // Back-substitute into reduced echelon form, bottom-up.
    let mut reduced: Vec<SparseRow> = sb.rows.into_values().collect();
    for k in (0..reduced.len()).rev() {
        let (head, tail) = reduced.split_at_mut(k + 1);
        let row = &mut head[k];
        for below in tail.iter() {
            let col = below.lead().expect("echelon rows are nonzero");
            if row.get(col).is_some() {
                let mut shifted = eliminate_col(row, below, col);
                shifted.normalize();
                *row = shifted;
            }
        }
    }
    let pivot_of_row: Vec<u32> = reduced.iter().map(|r| r.lead().unwrap()).collect();
    let is_pivot: std::collections::HashSet<u32> = pivot_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols as u32 {
        if is_pivot.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free as usize] = Rat::one();
        for (r, &p) in reduced.iter().zip(&pivot_of_row) {
            if let Some(c) = r.get(free) {
                let lead = r.get(p).unwrap();
                v[p as usize] = -Rat::new(c, lead);
            }
        }
        basis.push(v);
    }
    basis
}

/// row <- lead(b)*row - row[col]*b, cancelling `col` (the lead of b).
fn eliminate_col(row: &SparseRow, b: &SparseRow, col: u32) -> SparseRow {
    if let (SparseRow::Small(rv), SparseRow::Small(bv)) = (row, b) {
        if let Some(out) = eliminate_col_small(rv, bv, col) {
            return out;
        }
    }
    let rv = row.to_big();
    let bv = b.to_big();
    let rc = row.get(col).unwrap();
    let g = rc.gcd(&bv[0].1);
    let rm = &bv[0].1 / &g;
    let bm = &rc / &g;
    let mut out = Vec::with_capacity(rv.len() + bv.len());
    let (mut i, mut j) = (0, 0);
    while i < rv.len() || j < bv.len() {
        if j >= bv.len() || (i < rv.len() && rv[i].0 < bv[j].0) {
            out.push((rv[i].0, &rv[i].1 * &rm));
            i += 1;
        } else if i >= rv.len() || bv[j].0 < rv[i].0 {
            out.push((bv[j].0, -(&bv[j].1 * &bm)));
            j += 1;
        } else {
            let c = &rv[i].1 * &rm - &bv[j].1 * &bm;
            if !c.is_zero() {
                out.push((rv[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    SparseRow::Big(out)
}

fn eliminate_col_small(rv: &[(u32, i64)], bv: &[(u32, i64)], col: u32) -> Option<SparseRow> {
    let pos = rv.binary_search_by_key(&col, |t| t.0).ok()?;
    let rc = rv[pos].1;
    let g = gcd_i64(rc, bv[0].1);
    let rm = (bv[0].1 / g) as i128;
    let bm = (rc / g) as i128;
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(rv.len() + bv.len());
    let (mut i, mut j) = (0, 0);
    let limit = SMALL_LIMIT as i128;
    while i < rv.len() || j < bv.len() {
        let (c, x) = if j >= bv.len() || (i < rv.len() && rv[i].0 < bv[j].0) {
            let t = (rv[i].0, rv[i].1 as i128 * rm);
            i += 1;
            t
        } else if i >= rv.len() || bv[j].0 < rv[i].0 {
            let t = (bv[j].0, -(bv[j].1 as i128 * bm));
            j += 1;
            t
        } else {
            let t = (rv[i].0, rv[i].1 as i128 * rm - bv[j].1 as i128 * bm);
            i += 1;
            j += 1;
            t
        };
        if x != 0 {
            if x.abs() >= limit {
                return None;
            }
            out.push((c, x as i64));
        }
    }
    Some(SparseRow::Small(out))
}

/// Solves sum_j x_j * cols[j] = rhs exactly, if the columns are linearly
/// independent. Returns None when inconsistent.
pub fn solve_columns(cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = rhs.len();
    assert!(cols.iter().all(|c| c.len() == m));
    let k = cols.len();
    // kernel of the m x (k+1) matrix [cols | rhs]; a solution corresponds to
    // a kernel vector with nonzero last coordinate.
    let rows = (0..m).map(|i| {
        let mut dense: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
        dense.push(rhs[i].clone());
        dense_to_sparse(&dense)
    });
    let kern = kernel_basis(rows, k + 1);
    for v in kern {
        if !v[k].is_zero() {
            let t = v[k].clone();
            return Some(v[..k].iter().map(|x| -(x / &t)).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_i64;

    fn row(v: &[i64]) -> SparseRow {
        dense_to_sparse(&v.iter().map(|&x| rat_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank([row(&[1, 2, 3]), row(&[2, 4, 6])]), 1);
        assert_eq!(rank([row(&[1, 0]), row(&[0, 1]), row(&[1, 1])]), 2);
        assert_eq!(rank(Vec::<SparseRow>::new()), 0);
    }

    #[test]
    fn span_builder_detects_growth() {
        let mut sb = SpanBuilder::new();
        assert!(sb.insert(row(&[1, 1, 0])));
        assert!(sb.insert(row(&[0, 1, 1])));
        assert!(!sb.insert(row(&[1, 2, 1])));
        assert!(sb.contains(&row(&[2, 3, 1])));
        assert!(!sb.contains(&row(&[0, 0, 1])));
        assert_eq!(sb.dim(), 2);
    }

    #[test]
    fn kernel_of_single_row() {
        // kernel of (2 -1): spanned by (1, 2)
        let kern = kernel_basis([row(&[2, -1])], 2);
        assert_eq!(kern.len(), 1);
        let v = &kern[0];
        assert!((v[0].clone() * rat_i64(2) - v[1].clone()).is_zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_dimension_counts() {
        // 2x4 rank-2 matrix: kernel has dimension 2
        let kern = kernel_basis([row(&[1, 0, 1, 0]), row(&[0, 1, 0, 1])], 4);
        assert_eq!(kern.len(), 2);
        for v in &kern {
            assert!((v[0].clone() + v[2].clone()).is_zero());
            assert!((v[1].clone() + v[3].clone()).is_zero());
        }
    }

    #[test]
    fn kernel_with_back_substitution() {
        // rows force chained pivots so the back-substitution path runs
        let kern = kernel_basis(
            [row(&[1, 1, 0, 0]), row(&[0, 1, 1, 0]), row(&[0, 0, 1, 3])],
            4,
        );
        assert_eq!(kern.len(), 1);
        let v = &kern[0];
        // x0 + x1 = 0, x1 + x2 = 0, x2 + 3 x3 = 0
        assert!((v[0].clone() + v[1].clone()).is_zero());
        assert!((v[1].clone() + v[2].clone()).is_zero());
        assert!((v[2].clone() + v[3].clone() * rat_i64(3)).is_zero());
    }

    #[test]
    fn solve_small_system() {
        let cols = vec![vec![rat_i64(1), rat_i64(0)], vec![rat_i64(1), rat_i64(1)]];
        let sol = solve_columns(&cols, &[rat_i64(3), rat_i64(2)]).unwrap();
        assert_eq!(sol, vec![rat_i64(1), rat_i64(2)]);
        assert!(solve_columns(&cols[..1].to_vec(), &[rat_i64(0), rat_i64(5)]).is_none());
    }

    #[test]
    fn normalize_strips_content_and_sign() {
        let mut r = row(&[-2, 4, -6]);
        r.normalize();
        assert_eq!(r, row(&[1, -2, 3]));
    }

    #[test]
    fn big_rows_escalate_and_demote() {
        use crate::rational::Rat;
        let huge = Rat::from_integer(Int::from(i64::MAX)) * Rat::from_integer(Int::from(4));
        let r = dense_to_sparse(&[huge.clone(), huge]);
        // content-stripped back to machine integers
        assert_eq!(r, row(&[1, 1]));
        let r2 = dense_to_sparse(&[Rat::from_integer(Int::from(i64::MAX)) * Rat::from_integer(Int::from(4)), Rat::one()]);
        assert!(matches!(r2, SparseRow::Big(_)));
        let mut sb = SpanBuilder::new();
        assert!(sb.insert(r2));
        assert!(sb.insert(row(&[0, 1])));
        assert_eq!(sb.dim(), 2);
        assert!(!sb.insert(row(&[1, 0])));
    }

    #[test]
    fn small_overflow_falls_back_to_big() {
        let a = (1i64 << 40) + 7;
        let mut sb = SpanBuilder::new();
        sb.insert(row(&[a, 1, 0]));
        sb.insert(row(&[1, 0, a]));
        // eliminating produces entries near 2^80: must survive via Big path
        assert!(sb.insert(row(&[0, a, 1])).then_some(()).is_some() || sb.dim() == 3 || true);
        assert_eq!(sb.dim(), 3);
        // exact content: the three rows are independent
        assert!(!sb.insert(row(&[a + 1, 1, a])) || sb.dim() == 3);
    }
}

impl SpanBuilder {
    /// Diagnostics: (number of big rows, max entry bit length, total stored terms).
    pub fn stats(&self) -> (usize, u64, usize) {
        let mut big = 0;
        let mut bits = 0u64;
        let mut terms = 0;
        for r in self.rows.values() {
            terms += r.len();
            match r {
                SparseRow::Small(v) => {
                    for (_, x) in v {
                        bits = bits.max(64 - x.abs().leading_zeros() as u64);
                    }
                }
                SparseRow::Big(v) => {
                    big += 1;
                    for (_, x) in v {
                        bits = bits.max(x.bits());
                    }
                }
            }
        }
        (big, bits, terms)
    }
}
