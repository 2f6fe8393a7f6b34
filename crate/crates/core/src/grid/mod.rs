//! Phase-space grids, parallel field evaluation, integration and file output.

mod io;

use std::time::{Duration, Instant};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use io::{read_field_json, write_field, write_field_to, FieldFormat};

use crate::error::{Error, Result};
use crate::husimi::{husimi_point, FEvalOptions, KerrState};
use crate::logdomain::LogReal;
use crate::scalar::{from_usize, lit, Real};
use crate::wigner::{wigner_point_detailed, KmaxSearch, WignerOptions, WignerRing};

/// Resolution used by [`auto_window`].
pub const AUTO_RESOLUTION: [usize; 2] = [200, 200];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMode {
    /// Axes `x = Re β`, `p = Im β`.
    Cartesian,
    /// Axes `|β|`, `arg β`.
    Polar,
}

/// A rectangular lattice in `β`.
///
/// In polar mode the window is centred on the point `center`: the radial
/// axis spans `|center| ± extent[0]` (clipped at zero) and the angular axis
/// `arg center ± extent[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub mode: GridMode,
    pub center: Complex<T>,
    /// Half-widths per axis.
    pub extent: [T; 2],
    /// Node counts per axis.
    pub resolution: [usize; 2],
}

impl<T: Real> GridSpec<T> {
    pub fn cartesian(center: Complex<T>, half_width: [T; 2], resolution: [usize; 2]) -> Self {
        Self { mode: GridMode::Cartesian, center, extent: half_width, resolution }
    }

    pub fn polar(center: Complex<T>, half_width: [T; 2], resolution: [usize; 2]) -> Self {
        Self { mode: GridMode::Polar, center, extent: half_width, resolution }
    }

    pub fn with_resolution(self, resolution: [usize; 2]) -> Self {
        Self { resolution, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution.iter().any(|&n| n < 2) {
            return Err(Error::Precondition(format!("grid resolution {:?} needs at least 2 nodes per axis", self.resolution)));
        }
        if self.extent.iter().any(|&e| !(e > T::zero() && e.is_finite())) {
            return Err(Error::Precondition(format!("grid extents {:?} must be positive and finite", self.extent)));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::Precondition("grid centre must be finite".into()));
        }
        if self.mode == GridMode::Polar && self.extent[1] > T::PI() {
            return Err(Error::Precondition(format!("angular half-width {:?} exceeds pi", self.extent[1])));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.resolution[0] * self.resolution[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// End points of an axis.
    pub fn range(&self, axis: usize) -> (T, T) {
        let h = self.extent[axis];
        match (self.mode, axis) {
            (GridMode::Cartesian, 0) => (self.center.re - h, self.center.re + h),
            (GridMode::Cartesian, _) => (self.center.im - h, self.center.im + h),
            (GridMode::Polar, 0) => {
                let r = self.center.norm();
                ((r - h).max(T::zero()), r + h)
            }
            (GridMode::Polar, _) => {
                let phi = self.center.im.atan2(self.center.re);
                (phi - h, phi + h)
            }
        }
    }

    /// Node coordinates along an axis.
    pub fn axis(&self, axis: usize) -> Vec<T> {
        let (lo, hi) = self.range(axis);
        let n = self.resolution[axis];
        let last = from_usize::<T>(n - 1);
        (0..n).map(|i| lo + (hi - lo) * from_usize::<T>(i) / last).collect()
    }

    /// `β` at node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> Complex<T> {
        let u = self.axis_value(0, i);
        let v = self.axis_value(1, j);
        match self.mode {
            GridMode::Cartesian => Complex::new(u, v),
            GridMode::Polar => Complex::from_polar(u, v),
        }
    }

    fn axis_value(&self, axis: usize, i: usize) -> T {
        let (lo, hi) = self.range(axis);
        lo + (hi - lo) * from_usize::<T>(i) / from_usize::<T>(self.resolution[axis] - 1)
    }
}

/// Polar window around the bright part of the state.
///
/// The angular centre follows the mean self-phase rotation `2Γ|α|²` and the
/// half-width adds the coherent spread `1/|α|` to the shear `2|Γ||α|`.
/// The vacuum gets a cartesian square of half-width 4.
pub fn auto_window<T: Real>(state: &KerrState<T>) -> GridSpec<T> {
    let a = state.alpha.norm();
    let four = lit::<T>(4.0);
    if a == T::zero() {
        return GridSpec::cartesian(Complex::new(T::zero(), T::zero()), [four, four], AUTO_RESOLUTION);
    }
    let two = lit::<T>(2.0);
    let centre_arg = state.alpha.im.atan2(state.alpha.re) + two * state.gamma * a * a;
    let half = (lit::<T>(6.0) * (a.recip() + two * state.gamma.abs() * a)).min(T::PI());
    GridSpec::polar(Complex::from_polar(a, centre_arg), [four, half], AUTO_RESOLUTION)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Husimi,
    Wigner,
}

/// Evaluator settings for [`eval_field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldOptions {
    pub husimi: FEvalOptions,
    pub wigner: WignerOptions,
    /// Worker threads; `0` uses the rayon default. Does not affect results.
    #[serde(skip)]
    pub workers: usize,
}

/// Per-node `k_max` summary of a Wigner field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmaxStats {
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    /// Nodes whose search hit the cap.
    pub truncated: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalStats {
    pub points: usize,
    /// Not serialised, so files do not depend on timing.
    #[serde(skip)]
    pub wall_time: Duration,
    pub kmax: Option<KmaxStats>,
}

/// Values of `Q` or `W` on a grid, row-major with axis 0 outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct QpdField<T: Real> {
    pub spec: GridSpec<T>,
    pub kind: FieldKind,
    pub state: KerrState<T>,
    pub options: FieldOptions,
    pub stats: EvalStats,
    pub values: Vec<LogReal<T>>,
}

impl<T: Real> QpdField<T> {
    pub fn get(&self, i: usize, j: usize) -> LogReal<T> {
        self.values[i * self.spec.resolution[1] + j]
    }

    /// Smallest and largest linear value.
    pub fn min_max(&self) -> (T, T) {
        self.values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| {
            let x = v.value();
            (lo.min(x), hi.max(x))
        })
    }

    /// Node index of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let best = (0..self.values.len())
            .max_by(|&a, &b| {
                let (x, y) = (self.values[a].value(), self.values[b].value());
                x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        (best / self.spec.resolution[1], best % self.spec.resolution[1])
    }
}

fn node_error<T: Real>(spec: &GridSpec<T>, i: usize, j: usize, e: Error) -> Error {
    let b = spec.node(i, j);
    Error::Node {
        i,
        j,
        beta_re: b.re.to_f64().unwrap_or(f64::NAN),
        beta_im: b.im.to_f64().unwrap_or(f64::NAN),
        source: Box::new(e),
    }
}

type Row<T> = Vec<(LogReal<T>, Option<KmaxSearch>)>;

fn eval_row<T: Real>(state: &KerrState<T>, spec: &GridSpec<T>, kind: FieldKind, opts: &FieldOptions, i: usize) -> Result<Row<T>> {
    let n = spec.resolution[1];
    match kind {
        FieldKind::Husimi => (0..n)
            .map(|j| {
                husimi_point(state, spec.node(i, j), &opts.husimi)
                    .map(|v| (v, None))
                    .map_err(|e| node_error(spec, i, j, e))
            })
            .collect(),
        FieldKind::Wigner if spec.mode == GridMode::Polar => {
            let radius = spec.axis_value(0, i);
            let ring = WignerRing::new(state, radius, &opts.wigner).map_err(|e| node_error(spec, i, 0, e))?;
            let k = (state.gamma != T::zero()).then(|| ring.kmax());
            Ok((0..n).map(|j| (ring.eval(spec.axis_value(1, j)), k)).collect())
        }
        FieldKind::Wigner => (0..n)
            .map(|j| {
                wigner_point_detailed(state, spec.node(i, j), &opts.wigner)
                    .map(|e| (e.value, (state.gamma != T::zero()).then_some(e.kmax)))
                    .map_err(|e| node_error(spec, i, j, e))
            })
            .collect(),
    }
}

/// Evaluates `Q` or `W` at every node of `spec`.
///
/// Rows are computed concurrently on `options.workers` threads; each node
/// depends only on its coordinates, so the result is identical for any
/// worker count. The first failing node in row-major order is reported.
pub fn eval_field<T: Real>(
    state: &KerrState<T>,
    spec: &GridSpec<T>,
    kind: FieldKind,
    options: &FieldOptions,
) -> Result<QpdField<T>> {
    spec.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("worker pool: {e}")))?;
    let rows: Vec<Result<Row<T>>> =
        pool.install(|| (0..spec.resolution[0]).into_par_iter().map(|i| eval_row(state, spec, kind, options, i)).collect());
    let mut values = Vec::with_capacity(spec.len());
    let mut kmax: Option<KmaxStats> = None;
    let mut ksum = 0.0;
    for row in rows {
        for (v, k) in row? {
            values.push(v);
            if let Some(k) = k {
                let s = kmax.get_or_insert(KmaxStats { min: u64::MAX, max: 0, mean: 0.0, truncated: 0 });
                s.min = s.min.min(k.kmax);
                s.max = s.max.max(k.kmax);
                s.truncated += usize::from(k.truncated);
                ksum += k.kmax as f64;
            }
        }
    }
    if let Some(s) = kmax.as_mut() {
        s.mean = ksum / values.len() as f64;
    }
    Ok(QpdField {
        spec: *spec,
        kind,
        state: *state,
        options: *options,
        stats: EvalStats { points: values.len(), wall_time: start.elapsed(), kmax },
        values,
    })
}

fn trapezoid_weights<T: Real>(n: usize, lo: T, hi: T) -> Vec<T> {
    let h = (hi - lo) / from_usize::<T>(n - 1);
    (0..n).map(|i| if i == 0 || i == n - 1 { h * lit(0.5) } else { h }).collect()
}

/// Trapezoid-rule integral of the field over its window, with the `|β|`
/// Jacobian in polar mode.
pub fn integrate_field<T: Real>(field: &QpdField<T>) -> T {
    let spec = &field.spec;
    let (lo0, hi0) = spec.range(0);
    let (lo1, hi1) = spec.range(1);
    let mut w0 = trapezoid_weights(spec.resolution[0], lo0, hi0);
    let w1 = trapezoid_weights(spec.resolution[1], lo1, hi1);
    if spec.mode == GridMode::Polar {
        for (w, r) in w0.iter_mut().zip(spec.axis(0)) {
            *w *= r;
        }
    }
    let mut total = T::zero();
    for (i, &a) in w0.iter().enumerate() {
        let row = w1.iter().enumerate().fold(T::zero(), |s, (j, &b)| s + b * field.get(i, j).value());
        total += a * row;
    }
    total
}
