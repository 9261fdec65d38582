use std::sync::Arc;

use crate::scalar::{wrap_phase, Real};

/// Closed curve X(s), s ∈ [0, 1), sampled at s_k = k / points.
///
/// Closure holds by construction: sample `points` would coincide with sample 0,
/// so it is never evaluated separately.
pub struct LoopPath<X> {
    label: String,
    points: usize,
    reversed: bool,
    point: Arc<dyn Fn(f64) -> X + Send + Sync>,
}

impl<X> LoopPath<X> {
    pub fn new(label: impl Into<String>, points: usize, point: impl Fn(f64) -> X + Send + Sync + 'static) -> Self {
        Self { label: label.into(), points, reversed: false, point: Arc::new(point) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn with_points(&self, points: usize) -> Self {
        Self { points, ..self.clone() }
    }

    /// Same curve traversed backwards from the same base point.
    pub fn reversed(&self) -> Self {
        Self { reversed: !self.reversed, ..self.clone() }
    }

    /// X(s_k) for k in 0..points.
    pub fn sample(&self, k: usize) -> X {
        let n = self.points;
        let idx = if self.reversed { (n - k % n) % n } else { k % n };
        (self.point)(idx as f64 / n as f64)
    }
}

impl<X> Clone for LoopPath<X> {
    fn clone(&self) -> Self {
        Self { label: self.label.clone(), points: self.points, reversed: self.reversed, point: Arc::clone(&self.point) }
    }
}

impl<X> std::fmt::Debug for LoopPath<X> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LoopPath")
            .field("label", &self.label)
            .field("points", &self.points)
            .field("reversed", &self.reversed)
            .finish()
    }
}

/// Result of a phase computation.
///
/// `dynamical` and `total` are only present for phases obtained from time
/// evolution; `log_amplitude` is the real part of the complex log-holonomy
/// (non-unitary amplitude change around the loop) and only present for
/// holonomies.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport<T> {
    pub geometric: T,
    pub geometric_unwrapped: T,
    pub dynamical: Option<T>,
    pub total: Option<T>,
    pub log_amplitude: Option<T>,
    pub branch: Option<usize>,
    pub loop_label: String,
    pub points: usize,
}

impl<T: Real> PhaseReport<T> {
    pub(crate) fn from_unwrapped(unwrapped: T, branch: Option<usize>, loop_label: &str, points: usize) -> Self {
        Self {
            geometric: wrap_phase(unwrapped),
            geometric_unwrapped: unwrapped,
            dynamical: None,
            total: None,
            log_amplitude: None,
            branch,
            loop_label: loop_label.to_string(),
            points,
        }
    }
}
