//! Discrete holonomies of biorthogonal eigenvector loops.
//!
//! The reported value uses the endpoint-symmetrized log sum
//! `½[ln(<L_k|R_k+1>/<L_k|R_k>) − ln(<L_k+1|R_k>/<L_k+1|R_k+1>)]`, which is
//! gauge-invariant like the forward product but has an error expansion in
//! even powers of the step. Richardson extrapolation over the nested
//! sub-loops N, N/2, N/4 then removes the leading two error terms.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::report::{LoopPath, PhaseReport};
use crate::error::{Error, Result};
use crate::linalg::{eig_general, vector, ComplexMatrix};
use crate::scalar::{lift_near, Real};

/// Below this `|<L_prev|R_j>|` (with `<L_prev|R_prev> = 1`) the branch is lost.
pub const MIN_TRACKING_OVERLAP: f64 = 0.5;

/// Left/right eigenvector pair at one loop sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub eigenvalue: Complex<T>,
    pub left: Vec<Complex<T>>,
    pub right: Vec<Complex<T>>,
}

/// One eigen-branch followed around a loop.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedBranch<T> {
    pub frames: Vec<Frame<T>>,
    /// Index of the branch in `eig_general` order at every sample.
    pub indices: Vec<usize>,
    pub min_overlap: T,
}

/// Follows eigen-branch `branch` (index in `eig_general` order at the base
/// point) around the loop by maximal left/right overlap between neighbours.
pub fn track_branch<T, X, F>(h_eff: &F, path: &LoopPath<X>, branch: usize) -> Result<TrackedBranch<T>>
where
    T: Real,
    F: Fn(&X) -> Result<ComplexMatrix<T>>,
{
    let n = path.points();
    if n < 2 {
        return Err(Error::InvalidParameter("a loop needs at least 2 points".into()));
    }
    let first = eig_general(&h_eff(&path.sample(0))?)?;
    if branch >= first.dim() {
        return Err(Error::BranchOutOfRange { index: branch, dim: first.dim() });
    }
    let mut frames = Vec::with_capacity(n);
    let mut indices = Vec::with_capacity(n);
    let mut min_overlap = T::infinity();
    frames.push(Frame {
        eigenvalue: first.eigenvalues[branch],
        left: first.lefts[branch].clone(),
        right: first.rights[branch].clone(),
    });
    indices.push(branch);

    for k in 1..=n {
        let sys = if k == n { first.clone() } else { eig_general(&h_eff(&path.sample(k))?)? };
        let prev = &frames[k - 1].left;
        let (j, best) = (0..sys.dim())
            .map(|j| (j, vector::inner(prev, &sys.rights[j]).norm()))
            .fold((0, -T::one()), |a, b| if b.1 > a.1 { b } else { a });
        min_overlap = min_overlap.min(best);
        if best < T::lit(MIN_TRACKING_OVERLAP) {
            return Err(Error::BranchLost { point: k, overlap: best.to_f64_lossy() });
        }
        if k == n {
            if j != branch {
                return Err(Error::BranchLost { point: n, overlap: best.to_f64_lossy() });
            }
            break;
        }
        frames.push(Frame { eigenvalue: sys.eigenvalues[j], left: sys.lefts[j].clone(), right: sys.rights[j].clone() });
        indices.push(j);
    }
    Ok(TrackedBranch { frames, indices, min_overlap })
}

/// Rescales frames into a smooth single-valued gauge: every right vector gets
/// unit norm with the component that dominates at the base point real and
/// positive; every left vector then satisfies `<L|R> = 1`.
pub fn canonical_gauge<T: Real>(frames: &mut [Frame<T>]) {
    let Some(first) = frames.first() else { return };
    let pivot = vector::argmax_abs(&first.right);
    for f in frames.iter_mut() {
        let norm = vector::norm(&f.right);
        let z = f.right[pivot];
        let phase = if z.norm() > T::zero() { z.unscale(z.norm()) } else { Complex::one() };
        let s = phase.conj().unscale(norm);
        f.right = vector::scale(&f.right, s);
        let overlap = vector::inner(&f.left, &f.right);
        f.left = vector::scale(&f.left, Complex::<T>::one() / overlap.conj());
    }
}

/// `Π_k <L_k|R_k+1> / <L_k|R_k>` with cyclic closure. Invariant under any
/// per-frame rescaling of lefts and rights.
pub fn wilson_loop_product<T: Real>(frames: &[(Vec<Complex<T>>, Vec<Complex<T>>)]) -> Complex<T> {
    let n = frames.len();
    let mut prod = Complex::one();
    for k in 0..n {
        let (l, r) = &frames[k];
        let next = &frames[(k + 1) % n].1;
        prod = prod * vector::inner(l, next) / vector::inner(l, r);
    }
    prod
}

fn symmetric_log_sum<T: Real>(frames: &[(&[Complex<T>], &[Complex<T>])], stride: usize) -> Complex<T> {
    let n = frames.len();
    let half = T::lit(0.5);
    let mut sum = Complex::zero();
    let mut k = 0;
    while k < n {
        let (li, ri) = frames[k];
        let (lj, rj) = frames[(k + stride) % n];
        let fwd = (vector::inner(li, rj) / vector::inner(li, ri)).ln();
        let bwd = (vector::inner(lj, ri) / vector::inner(lj, rj)).ln();
        sum = sum + (fwd - bwd).scale(half);
        k += stride;
    }
    sum
}

fn lift_imag<T: Real>(z: Complex<T>, reference: Complex<T>) -> Complex<T> {
    Complex::new(z.re, lift_near(z.im, reference.im))
}

/// Complex log-holonomy `≈ ∮ <L|dR>` of frames taken in the gauge given.
///
/// Frames must be smooth in that gauge for the imaginary part to be the
/// continuous (unwrapped) value; its value mod 2π is gauge-invariant.
pub fn log_holonomy<T: Real>(frames: &[(&[Complex<T>], &[Complex<T>])]) -> Complex<T> {
    let n = frames.len();
    let v1 = symmetric_log_sum(frames, 1);
    if !n.is_multiple_of(2) || n < 8 {
        return v1;
    }
    let v2 = lift_imag(symmetric_log_sum(frames, 2), v1);
    let three = T::lit(3.0);
    let r1 = (v1.scale(T::lit(4.0)) - v2).unscale(three);
    if !n.is_multiple_of(4) || n < 16 {
        return r1;
    }
    let v4 = lift_imag(symmetric_log_sum(frames, 4), v1);
    let r2 = (v2.scale(T::lit(4.0)) - v4).unscale(three);
    (r1.scale(T::lit(16.0)) - r2).unscale(T::lit(15.0))
}

/// Canonical gauge followed by [`log_holonomy`].
pub fn holonomy_from_frames<T: Real>(frames: &[(Vec<Complex<T>>, Vec<Complex<T>>)]) -> Complex<T> {
    let mut fs: Vec<Frame<T>> = frames
        .iter()
        .map(|(l, r)| Frame { eigenvalue: Complex::zero(), left: l.clone(), right: r.clone() })
        .collect();
    canonical_gauge(&mut fs);
    let refs: Vec<_> = fs.iter().map(|f| (f.left.as_slice(), f.right.as_slice())).collect();
    log_holonomy(&refs)
}

/// Non-Hermitian Berry phase `Im ∮ <Φ_n|∇φ_n>` of branch `branch` (index in
/// `eig_general` order at the base point) over `path`.
pub fn adiabatic_berry_phase<T, X, F>(h_eff: F, path: &LoopPath<X>, branch: usize) -> Result<PhaseReport<T>>
where
    T: Real,
    F: Fn(&X) -> Result<ComplexMatrix<T>>,
{
    let mut tracked = track_branch(&h_eff, path, branch)?;
    canonical_gauge(&mut tracked.frames);
    let refs: Vec<_> = tracked.frames.iter().map(|f| (f.left.as_slice(), f.right.as_slice())).collect();
    let c = log_holonomy(&refs);
    let mut report = PhaseReport::from_unwrapped(c.im, Some(branch), path.label(), path.points());
    report.log_amplitude = Some(c.re);
    Ok(report)
}
