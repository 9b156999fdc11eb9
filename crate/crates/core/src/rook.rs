//! Rook statistics on rectangles and on weak order intervals, the `□ₖ`
//! decomposition relating them, and the per-permutation certificate that
//! assembles rooks into `(a+b)·ddeg ≡ ab` in expectation.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use thiserror::Error;

use crate::cde::ToggleSymmetricSampler;
use crate::lattice::{expectation, integer, Distribution, Statistic};
use crate::perm::{Permutation, Side};
use crate::shape::{
    cross_saturation, inverse_inversion_coefficients, inverse_inversion_diagram, skew_vexillary_shape, Cell, Partition,
    ShapeError, SkewShape,
};
use crate::weakinterval::{GrassLabel, WeakInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RookError {
    #[error("anchor {anchor:?} outside the {a}×{b} rectangle")]
    AnchorOutOfRange { anchor: Cell, a: u32, b: u32 },
    #[error("partition does not fit in the {a}×{b} rectangle")]
    PartitionTooBig { a: u32, b: u32 },
    #[error("{0:?} is not a cross-saturated box")]
    NotCrossSaturated(Cell),
    #[error("{0:?} is not below w")]
    NotInInterval(Permutation),
    #[error("k = {k} out of range for n = {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("not skew vexillary of a connected balanced shape")]
    NotBalancedShape,
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(&'static str),
}

/// `+1`/`−1` times `T⁺` or `T⁻` at some box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RectTerm {
    pub cell: Cell,
    pub plus: bool,
    pub coeff: i64,
}

fn check_rect(a: u32, b: u32, anchor: Cell, nu: &Partition) -> Result<(), RookError> {
    if !(1..=a).contains(&anchor.0) || !(1..=b).contains(&anchor.1) {
        return Err(RookError::AnchorOutOfRange { anchor, a, b });
    }
    if nu.len() > a as usize || nu.part(1) > b {
        return Err(RookError::PartitionTooBig { a, b });
    }
    Ok(())
}

/// Box `(r,c)` can be added to `ν` inside `bᵃ`.
fn addable(nu: &Partition, r: u32, c: u32) -> bool {
    nu.part(r as usize) + 1 == c && (r == 1 || nu.part(r as usize - 1) >= c)
}

/// Box `(r,c)` can be removed from `ν`.
fn removable(nu: &Partition, r: u32, c: u32) -> bool {
    nu.part(r as usize) == c && nu.part(r as usize + 1) < c
}

/// Nonzero terms of `R_{(i,j)}(ν)` on `[∅, bᵃ]`.
pub fn rect_rook_terms(a: u32, b: u32, anchor: Cell, nu: &Partition) -> Result<Vec<RectTerm>, RookError> {
    check_rect(a, b, anchor, nu)?;
    let (i, j) = anchor;
    let mut out = Vec::new();
    for r in 1..=a {
        for c in 1..=b {
            let plus = if r <= i && c <= j {
                1
            } else if r > i && c > j {
                -1
            } else {
                0
            };
            let minus = if r >= i && c >= j {
                1
            } else if r < i && c < j {
                -1
            } else {
                0
            };
            if plus != 0 && r <= a && c <= b && addable(nu, r, c) {
                out.push(RectTerm { cell: (r, c), plus: true, coeff: plus });
            }
            if minus != 0 && removable(nu, r, c) {
                out.push(RectTerm { cell: (r, c), plus: false, coeff: minus });
            }
        }
    }
    Ok(out)
}

/// `R_{(i,j)}(ν)`; always 1.
pub fn rect_rook_eval(a: u32, b: u32, anchor: Cell, nu: &Partition) -> Result<i64, RookError> {
    let v = rect_rook_terms(a, b, anchor, nu)?.iter().map(|t| t.coeff).sum();
    debug_assert_eq!(v, 1);
    Ok(v)
}

/// The unique `k` with `(k,k+1)` in the cross-saturation `C` of `anchor` in
/// `Inv⁻¹(w)`, together with `C`.
pub fn box_square_k(w: &Permutation, anchor: Cell) -> Result<(usize, BTreeSet<Cell>), RookError> {
    let d = inverse_inversion_diagram(w);
    let c = match cross_saturation(&d, anchor) {
        Ok(Some(c)) => c,
        _ => return Err(RookError::NotCrossSaturated(anchor)),
    };
    let ks: Vec<u32> = c.iter().filter(|&&(r, s)| s == r + 1).map(|&(r, _)| r).collect();
    assert_eq!(ks.len(), 1, "exactly one (k,k+1) in the cross-saturation");
    let k = ks[0];
    let (i, j) = anchor;
    assert!(c.iter().all(|&(r, s)| r <= k && s > k), "cross-saturation inside the k-block");
    assert!((i..=k).all(|r| (k + 1..=j).all(|s| c.contains(&(r, s)))));
    Ok((k as usize, c))
}

/// `w = (u,v)·w″` with `w″` a shuffle of `1..k` and `k+1..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectDecomposition {
    pub n: usize,
    pub k: usize,
    pub u: Permutation,
    pub v: Permutation,
    u_inv: Permutation,
    v_inv: Permutation,
    pub nu: Partition,
}

impl RectDecomposition {
    /// `Π(i,j) = (u⁻¹(i), k + v⁻¹(j−k))` on `□ₖ`.
    pub fn pi(&self, cell: Cell) -> Cell {
        let k = self.k as u32;
        (self.u_inv.at(cell.0 as usize) as u32, k + self.v_inv.at((cell.1 - k) as usize) as u32)
    }

    /// `Ψ(i,j) = (j−k, k+1−i)` onto `[n−k]×[k]`.
    pub fn psi(&self, cell: Cell) -> Cell {
        let k = self.k as u32;
        (cell.1 - k, k + 1 - cell.0)
    }

    /// Rectangle `(a, b) = (n−k, k)`.
    pub fn rectangle(&self) -> (u32, u32) {
        ((self.n - self.k) as u32, self.k as u32)
    }

    /// Checks that a box of `□ₖ` can be added to (removed from) `Inv⁻¹(w)`
    /// exactly when its image can be added to (removed from) `ν`.
    pub fn toggles_correspond(&self, w: &Permutation) -> bool {
        let inv = w.inversion_set(Side::Inverse);
        let (a, b) = self.rectangle();
        for i in 1..=self.k {
            for j in self.k + 1..=self.n {
                let (r, c) = self.psi(self.pi((i as u32, j as u32)));
                let mut s = inv;
                if inv.contains(i, j) {
                    s.remove(i, j);
                    if s.is_valid() != removable(&self.nu, r, c) {
                        return false;
                    }
                } else {
                    s.insert(i, j);
                    if s.is_valid() != (r <= a && c <= b && addable(&self.nu, r, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn rect_decomposition(w: &Permutation, k: usize) -> Result<RectDecomposition, RookError> {
    let n = w.n();
    if !(1 <= k && k < n) {
        return Err(RookError::KOutOfRange { k, n });
    }
    let word: Vec<usize> = w.word().iter().map(|&x| x as usize).collect();
    let u = Permutation::new(&word.iter().copied().filter(|&x| x <= k).collect::<Vec<_>>()).unwrap();
    let v = Permutation::new(&word.iter().filter(|&&x| x > k).map(|&x| x - k).collect::<Vec<_>>()).unwrap();
    let mut d = RectDecomposition {
        n,
        k,
        u_inv: u.inverse(),
        v_inv: v.inverse(),
        u,
        v,
        nu: Partition::empty(),
    };
    let mut rows = alloc::vec![0u32; n - k];
    for (i, j) in w.inversion_set(Side::Inverse).pairs() {
        if i <= k && j > k {
            let (r, _) = d.psi(d.pi((i as u32, j as u32)));
            rows[r as usize - 1] += 1;
        }
    }
    d.nu = Partition::new(rows).expect("Ψ(S) is a partition");
    Ok(d)
}

/// `±T^±_g` for an irreducible `g` of `[e,w]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermTerm {
    pub label: GrassLabel,
    pub plus: bool,
    pub coeff: i64,
}

/// The permutation rook at a cross-saturated box of `Inv⁻¹(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermRook {
    pub w: Permutation,
    pub anchor: Cell,
    pub k: usize,
    pub saturation: BTreeSet<Cell>,
}

impl PermRook {
    pub fn new(w: &Permutation, anchor: Cell) -> Result<Self, RookError> {
        let (k, saturation) = box_square_k(w, anchor)?;
        Ok(PermRook { w: *w, anchor, k, saturation })
    }

    /// Coefficients `(c⁺, c⁻)` of `T⁺_g` and `T⁻_g` for `g = g((i′,j′),x)`.
    pub fn coefficients(&self, g: &GrassLabel) -> (i64, i64) {
        let (ip, jp) = (g.i as u32, g.j as u32);
        if !self.saturation.contains(&(ip, jp)) {
            return (0, 0);
        }
        let (i, j) = self.anchor;
        let has_i = g.contains(i as usize);
        let has_j = g.contains(j as usize);
        use core::cmp::Ordering::*;
        match (ip.cmp(&i), jp.cmp(&j)) {
            (Greater, Less) => (1, -1),
            (Equal, Less) => (1, 0),
            (Greater, Equal) => (1, 0),
            (Equal, Equal) => (1, 1),
            (Less, Less) if has_i => (1, -1),
            (Greater, Greater) if !has_j => (1, -1),
            (Equal, Greater) => {
                if has_j {
                    (0, 1)
                } else {
                    (1, 0)
                }
            }
            (Less, Equal) => {
                if has_i {
                    (1, 0)
                } else {
                    (0, 1)
                }
            }
            (Less, Greater) => match (has_i, has_j) {
                (true, false) => (1, -1),
                (false, true) => (-1, 1),
                _ => (0, 0),
            },
            _ => (0, 0),
        }
    }

    /// Nonzero terms of `R̂(w′)`.
    pub fn terms(&self, w_prime: &Permutation) -> Result<Vec<PermTerm>, RookError> {
        let inv_w = self.w.inversion_set(Side::Inverse);
        if w_prime.n() != self.w.n() || !w_prime.inversion_set(Side::Inverse).is_subset(&inv_w) {
            return Err(RookError::NotInInterval(*w_prime));
        }
        let word = w_prime.word();
        let mut out = Vec::new();
        for p in 0..word.len() - 1 {
            let (x, y) = (word[p] as usize, word[p + 1] as usize);
            let (i, j, plus) = if x < y { (x, y, true) } else { (y, x, false) };
            if !self.saturation.contains(&(i as u32, j as u32)) {
                continue;
            }
            let xs = word[..p].iter().map(|&z| z as usize).filter(|&z| i < z && z < j);
            let label = GrassLabel::new(i, j, xs);
            let (cp, cm) = self.coefficients(&label);
            let coeff = if plus { cp } else { cm };
            if coeff != 0 {
                out.push(PermTerm { label, plus, coeff });
            }
        }
        Ok(out)
    }

    pub fn eval(&self, w_prime: &Permutation) -> Result<i64, RookError> {
        Ok(self.terms(w_prime)?.iter().map(|t| t.coeff).sum())
    }

    /// The rook as a statistic on `iv = [e,w]`, assembled from the per-irreducible
    /// toggleability statistics of the interval's labeling.
    pub fn statistic(&self, iv: &WeakInterval) -> Statistic {
        assert_eq!(iv.w(), &self.w);
        let gl = iv.gamma();
        let mut f = Statistic::zero(iv.len());
        for &p in gl.irreducibles() {
            let g = iv.irreducible_label(p).expect("irreducibles are Grassmannian");
            let (cp, cm) = self.coefficients(&g);
            if cp != 0 {
                f.add_scaled(&integer(cp), &gl.t_plus(p).unwrap());
            }
            if cm != 0 {
                f.add_scaled(&integer(cm), &gl.t_minus(p).unwrap());
            }
        }
        f
    }

    /// `Σ_{(i′,j)} T⁻_{(i′,j)} + Σ_{(i,j′)} T⁻_{(i,j′)}` over `Inv⁻¹(w)`, the
    /// anchor counted twice.
    pub fn attacked(&self, iv: &WeakInterval) -> Statistic {
        let (i, j) = (self.anchor.0 as usize, self.anchor.1 as usize);
        let mut f = Statistic::zero(iv.len());
        for (a, b) in self.w.inversion_set(Side::Inverse).pairs() {
            let times = (a == i) as i64 + (b == j) as i64;
            if times > 0 {
                let (_, minus, _) = iv.aggregated_toggleability(a, b).unwrap();
                f.add_scaled(&integer(times), &minus);
            }
        }
        f
    }

    /// Checks that the nonzero terms at `w′` match those of the rectangle rook at
    /// `Ψ(Π(anchor))` on `ν(w′)` under `Ψ∘Π`.
    pub fn terms_match_rectangle(&self, w_prime: &Permutation) -> Result<bool, RookError> {
        let d = rect_decomposition(w_prime, self.k)?;
        let (a, b) = d.rectangle();
        let anchor = d.psi(d.pi(self.anchor));
        let mut rect = rect_rook_terms(a, b, anchor, &d.nu)?;
        let mut mapped: Vec<RectTerm> = self
            .terms(w_prime)?
            .into_iter()
            .map(|t| RectTerm { cell: d.psi(d.pi((t.label.i as u32, t.label.j as u32))), plus: t.plus, coeff: t.coeff })
            .collect();
        rect.sort();
        mapped.sort();
        Ok(rect == mapped)
    }
}

/// `R̂_{(i,j)}(w′)`; always 1.
pub fn perm_rook_eval(w: &Permutation, anchor: Cell, w_prime: &Permutation) -> Result<i64, RookError> {
    PermRook::new(w, anchor)?.eval(w_prime)
}

/// Cross-saturated boxes of `Inv⁻¹(w)`.
pub fn cross_saturated_boxes(w: &Permutation) -> Vec<Cell> {
    let d = inverse_inversion_diagram(w);
    d.boxes().iter().copied().filter(|&c| matches!(cross_saturation(&d, c), Ok(Some(_)))).collect()
}

/// Counts from an exhaustive rook check on one `w`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RookTally {
    pub anchors: u64,
    pub evaluations: u64,
    pub failures: u64,
    pub mismatched_terms: u64,
}

impl RookTally {
    pub fn merge(mut self, o: RookTally) -> RookTally {
        self.anchors += o.anchors;
        self.evaluations += o.evaluations;
        self.failures += o.failures;
        self.mismatched_terms += o.mismatched_terms;
        self
    }
}

/// Evaluates every rook of `Inv⁻¹(w)` at every `w′ ≤ w`; with `match_terms`
/// also replays the term matching against the rectangle rook.
pub fn verify_rooks(w: &Permutation, match_terms: bool) -> RookTally {
    let anchors = cross_saturated_boxes(w);
    let mut tally = RookTally { anchors: anchors.len() as u64, ..Default::default() };
    if anchors.is_empty() {
        return tally;
    }
    let iv = WeakInterval::new(w);
    for anchor in anchors {
        let rook = PermRook::new(w, anchor).unwrap();
        for u in iv.elements() {
            tally.evaluations += 1;
            if rook.eval(u) != Ok(1) {
                tally.failures += 1;
            }
            if match_terms && rook.terms_match_rectangle(u) != Ok(true) {
                tally.mismatched_terms += 1;
            }
        }
    }
    tally
}

/// Per-permutation certificate for the main theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCertificate {
    pub w: Permutation,
    pub shape: SkewShape,
    pub a: u32,
    pub b: u32,
    /// rook coefficients on `Inv⁻¹(w)`
    pub coefficients: Vec<(Cell, i64)>,
    /// `ab`, the constant value of `Σ c·R̂`
    pub constant: i64,
    pub density: BigRational,
    pub distributions_checked: usize,
}

/// Builds `f = Σ c_{(i,j)} R̂_{(i,j)}`, checks `f ≡ ab` on `[e,w]` and
/// `E(μ;f) = (a+b)·E(μ;ddeg)` for uniform, rowmotion-orbit and `samples`
/// random toggle-symmetric distributions.
pub fn theorem_certificate<R: Rng + ?Sized>(
    w: &Permutation,
    samples: usize,
    rng: &mut R,
) -> Result<TheoremCertificate, RookError> {
    let shape = skew_vexillary_shape(w).ok_or(RookError::NotBalancedShape)?;
    if shape.size() == 0 || !shape.is_connected() {
        return Err(RookError::NotBalancedShape);
    }
    let (a, b) = shape.dims();
    let (_, rc) = inverse_inversion_coefficients(w).map_err(|e| match e {
        ShapeError::CoefficientViolation(s) => RookError::CoefficientMismatch(s),
        _ => RookError::NotBalancedShape,
    })?;
    let ab = (a * b) as i64;
    if rc.total() != ab {
        return Err(RookError::CoefficientMismatch("coefficients do not sum to ab"));
    }
    let iv = WeakInterval::new(w);
    let mut f = Statistic::zero(iv.len());
    for (cell, c) in rc.nonzero() {
        let rook = PermRook::new(w, cell)?;
        f.add_scaled(&integer(c), &rook.statistic(&iv));
    }
    if f != Statistic::constant(iv.len(), integer(ab)) {
        return Err(RookError::CoefficientMismatch("rook sum is not constant ab"));
    }
    let gl = iv.gamma();
    let ddeg = gl.ddeg();
    let scale = integer((a + b) as i64);
    let mut distributions = alloc::vec![Distribution::uniform(iv.len())];
    for orbit in gl.rowmotion_orbits().expect("weak order intervals have rowmotion") {
        distributions.push(Distribution::orbit_uniform(iv.len(), &orbit).unwrap());
    }
    let sampler = ToggleSymmetricSampler::new(gl);
    distributions.extend((0..samples).map(|_| sampler.sample(rng)));
    for mu in &distributions {
        if expectation(mu, &f).unwrap() != &scale * expectation(mu, &ddeg).unwrap() {
            return Err(RookError::CoefficientMismatch("E(μ;f) ≠ (a+b)·E(μ;ddeg)"));
        }
    }
    Ok(TheoremCertificate {
        w: *w,
        shape,
        a,
        b,
        coefficients: rc.nonzero().collect(),
        constant: ab,
        density: BigRational::new(BigInt::from(a * b), BigInt::from(a + b)),
        distributions_checked: distributions.len(),
    })
}
