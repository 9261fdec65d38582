//! Decomposition of a loop holonomy into Schmidt-term subsystem holonomies.

use num_complex::Complex;
use num_traits::Zero;

use super::holonomy::{canonical_gauge, log_holonomy, track_branch};
use super::report::LoopPath;
use crate::error::{Error, Result};
use crate::linalg::{schmidt, vector, BipartiteState, ComplexMatrix, SchmidtDecomposition};
use crate::scalar::{wrap_phase, Real};

/// Largest tolerated change of a Schmidt weight along the loop.
pub const WEIGHT_VARIATION_TOL: f64 = 1e-6;
/// Relative gap below which two Schmidt weights count as degenerate.
pub const SCHMIDT_GAP_TOL: f64 = 1e-8;
/// Weights closer than this (relative) are paired by overlap instead of order.
pub const PAIRING_TIE_TOL: f64 = 1e-6;

/// One Schmidt term j of the right/left pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitTerm<T> {
    /// √p_j of the right vector and √P_j of the left vector.
    pub weight_right: T,
    pub weight_left: T,
    /// `√p_j √P_j <E_j|e_j> <F_j|f_j>`, invariant under the Schmidt phase freedom.
    pub weight: Complex<T>,
    /// Complex log-holonomy of the subsystem-a curve (E_j, e_j).
    pub log_a: Complex<T>,
    /// Complex log-holonomy of the subsystem-b curve (F_j, f_j).
    pub log_b: Complex<T>,
}

impl<T: Real> SplitTerm<T> {
    pub fn phase_a(&self) -> T {
        self.log_a.im
    }

    pub fn phase_b(&self) -> T {
        self.log_b.im
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemPhaseSplit<T> {
    pub terms: Vec<SplitTerm<T>>,
    /// `Im Σ_j weight_j (log_a_j + log_b_j)`.
    pub recombined: T,
    /// Direct holonomy of the full eigenvector pair, unwrapped.
    pub direct: T,
    /// `recombined − direct` reduced to (−π, π].
    pub residual: T,
    pub max_weight_variation: T,
    pub points: usize,
}

struct Gauged<T> {
    weights: Vec<T>,
    a: Vec<Vec<Complex<T>>>,
    b: Vec<Vec<Complex<T>>>,
}

/// Fixes each Schmidt pair's phase: component `pivots[j]` of the a-vector real
/// positive, with the conjugate phase moved onto the b-vector.
fn gauge_schmidt<T: Real>(d: SchmidtDecomposition<T>, pivots: &[usize]) -> Gauged<T> {
    let mut a = d.vectors_a;
    let mut b = d.vectors_b;
    for j in 0..a.len() {
        let z = a[j][pivots[j]];
        if z.norm() > T::zero() {
            let phase = z.unscale(z.norm());
            a[j] = vector::scale(&a[j], phase.conj());
            b[j] = vector::scale(&b[j], phase);
        }
    }
    Gauged { weights: d.weights, a, b }
}

fn check_gaps<T: Real>(d: &SchmidtDecomposition<T>) -> Result<()> {
    let top = d.weights.first().copied().unwrap_or(T::zero());
    for w in d.weights.windows(2) {
        let gap = w[0] - w[1];
        if gap < T::lit(SCHMIDT_GAP_TOL) * top {
            return Err(Error::SchmidtDegenerate { gap: gap.to_f64_lossy() });
        }
    }
    Ok(())
}

/// Order of left terms paired with right terms 0, 1, ...: by weight, with
/// near-equal weights resolved by the largest |<E|e>|.
fn pair_terms<T: Real>(right: &SchmidtDecomposition<T>, left: &SchmidtDecomposition<T>) -> Vec<usize> {
    let top = left.weights.first().copied().unwrap_or(T::one());
    let mut used = vec![false; left.rank()];
    let mut order = Vec::with_capacity(right.rank());
    for j in 0..right.rank().min(left.rank()) {
        let next = (0..left.rank()).find(|&i| !used[i]).unwrap();
        let candidates: Vec<usize> = (0..left.rank())
            .filter(|&i| !used[i] && (left.weights[next] - left.weights[i]).abs() <= T::lit(PAIRING_TIE_TOL) * top)
            .collect();
        let best = candidates
            .into_iter()
            .max_by(|&x, &y| {
                let ox = vector::inner(&left.vectors_a[x], &right.vectors_a[j]).norm();
                let oy = vector::inner(&left.vectors_a[y], &right.vectors_a[j]).norm();
                ox.partial_cmp(&oy).unwrap()
            })
            .unwrap();
        used[best] = true;
        order.push(best);
    }
    order
}

fn reorder<T: Real>(d: SchmidtDecomposition<T>, order: &[usize]) -> SchmidtDecomposition<T> {
    SchmidtDecomposition {
        weights: order.iter().map(|&i| d.weights[i]).collect(),
        vectors_a: order.iter().map(|&i| d.vectors_a[i].clone()).collect(),
        vectors_b: order.iter().map(|&i| d.vectors_b[i].clone()).collect(),
    }
}

/// Splits the branch holonomy over `path` into per-Schmidt-term subsystem
/// holonomies and recombines them.
///
/// Requires Schmidt weights that stay constant along the loop and a
/// non-degenerate Schmidt spectrum.
pub fn subsystem_phase_split<T, X, F>(
    h_eff: F,
    dims: (usize, usize),
    path: &LoopPath<X>,
    branch: usize,
) -> Result<SubsystemPhaseSplit<T>>
where
    T: Real,
    F: Fn(&X) -> Result<ComplexMatrix<T>>,
{
    let mut tracked = track_branch(&h_eff, path, branch)?;
    canonical_gauge(&mut tracked.frames);
    let (da, db) = dims;

    let mut rights = Vec::with_capacity(tracked.frames.len());
    let mut lefts = Vec::with_capacity(tracked.frames.len());
    for f in &tracked.frames {
        let r = schmidt(&BipartiteState::new(da, db, f.right.clone())?)?;
        let l = schmidt(&BipartiteState::new(da, db, f.left.clone())?)?;
        check_gaps(&r)?;
        check_gaps(&l)?;
        if r.rank() != l.rank() {
            return Err(Error::WeightsVary { variation: f64::INFINITY });
        }
        let order = pair_terms(&r, &l);
        rights.push(r);
        lefts.push(reorder(l, &order));
    }

    let rank = rights[0].rank();
    let mut variation = T::zero();
    for (r, l) in rights.iter().zip(&lefts) {
        if r.rank() != rank {
            return Err(Error::WeightsVary { variation: f64::INFINITY });
        }
        for j in 0..rank {
            variation = variation.max((r.weights[j] - rights[0].weights[j]).abs());
            variation = variation.max((l.weights[j] - lefts[0].weights[j]).abs());
        }
    }
    if variation > T::lit(WEIGHT_VARIATION_TOL) {
        return Err(Error::WeightsVary { variation: variation.to_f64_lossy() });
    }

    let pivots_r: Vec<usize> = rights[0].vectors_a.iter().map(|v| vector::argmax_abs(v)).collect();
    let pivots_l: Vec<usize> = lefts[0].vectors_a.iter().map(|v| vector::argmax_abs(v)).collect();
    let rights: Vec<Gauged<T>> = rights.into_iter().map(|d| gauge_schmidt(d, &pivots_r)).collect();
    let lefts: Vec<Gauged<T>> = lefts.into_iter().map(|d| gauge_schmidt(d, &pivots_l)).collect();

    let mut terms = Vec::with_capacity(rank);
    let mut total = Complex::zero();
    for j in 0..rank {
        let frames_a: Vec<_> = lefts.iter().zip(&rights).map(|(l, r)| (l.a[j].as_slice(), r.a[j].as_slice())).collect();
        let frames_b: Vec<_> = lefts.iter().zip(&rights).map(|(l, r)| (l.b[j].as_slice(), r.b[j].as_slice())).collect();
        let log_a = log_holonomy(&frames_a);
        let log_b = log_holonomy(&frames_b);
        let (r0, l0) = (&rights[0], &lefts[0]);
        let weight = vector::inner(&l0.a[j], &r0.a[j]) * vector::inner(&l0.b[j], &r0.b[j])
            * Complex::new(r0.weights[j] * l0.weights[j], T::zero());
        total = total + weight * (log_a + log_b);
        terms.push(SplitTerm { weight_right: r0.weights[j], weight_left: l0.weights[j], weight, log_a, log_b });
    }

    let refs: Vec<_> = tracked.frames.iter().map(|f| (f.left.as_slice(), f.right.as_slice())).collect();
    let direct = log_holonomy(&refs).im;
    let recombined = total.im;
    Ok(SubsystemPhaseSplit {
        terms,
        recombined,
        direct,
        residual: wrap_phase(recombined - direct),
        max_weight_variation: variation,
        points: path.points(),
    })
}
