//! Batch evaluation over rectangular complex-plane grids.
//!
//! Points are ordered row-major by (im index, re index) and the output order
//! is independent of how the work is scheduled, so grid sweeps are
//! byte-reproducible. With the `parallel` feature (on by default) the points
//! fan out across a rayon pool; the sequential path is always available as
//! [`eval_grid_serial`].

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{ki, EvalConfig, FamilyIndex, Route};

/// Rectangular sampling description. `*_steps = 1` collapses that axis to
/// its minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub re_steps: u32,
    pub im_min: f64,
    pub im_max: f64,
    pub im_steps: u32,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for v in [self.re_min, self.re_max, self.im_min, self.im_max] {
            if !v.is_finite() {
                return Err(Error::Domain("grid bounds must be finite".into()));
            }
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(Error::Domain("grid bounds must satisfy min <= max".into()));
        }
        if self.re_steps < 1 || self.im_steps < 1 {
            return Err(Error::Domain("grid steps must be at least 1".into()));
        }
        let total = self.re_steps as u64 * self.im_steps as u64;
        if total > 10_000_000 {
            return Err(Error::Domain(format!(
                "grid has {total} points, more than the 10^7 cap"
            )));
        }
        Ok(())
    }

    fn axis(min: f64, max: f64, steps: u32, idx: u32) -> f64 {
        if steps == 1 {
            min
        } else {
            min + idx as f64 * (max - min) / (steps - 1) as f64
        }
    }

    /// Grid points in output order: row-major by (im index, re index).
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.re_steps as usize * self.im_steps as usize);
        for im_idx in 0..self.im_steps {
            let im = Self::axis(self.im_min, self.im_max, self.im_steps, im_idx);
            for re_idx in 0..self.re_steps {
                let re = Self::axis(self.re_min, self.re_max, self.re_steps, re_idx);
                pts.push(Complex64::new(re, im));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridStatus {
    Ok,
    NearPole,
}

impl GridStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GridStatus::Ok => "ok",
            GridStatus::NearPole => "near_pole",
        }
    }
}

/// One evaluated grid point. Value fields are absent for points inside a
/// pole exclusion zone, which are reported rather than aborting the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRecord {
    pub i: u32,
    pub re: f64,
    pub im: f64,
    pub value: Option<Complex64>,
    pub method: Option<Route>,
    pub est_abs_error: Option<f64>,
    pub status: GridStatus,
}

fn eval_point(i: FamilyIndex, z: Complex64, cfg: &EvalConfig) -> Result<GridRecord> {
    match ki(i, z, cfg) {
        Ok(eval) => Ok(GridRecord {
            i: i.get(),
            re: z.re,
            im: z.im,
            value: Some(eval.value),
            method: Some(eval.method),
            est_abs_error: Some(eval.est_abs_error),
            status: GridStatus::Ok,
        }),
        Err(Error::Pole { .. }) | Err(Error::NearPole { .. }) => Ok(GridRecord {
            i: i.get(),
            re: z.re,
            im: z.im,
            value: None,
            method: None,
            est_abs_error: None,
            status: GridStatus::NearPole,
        }),
        Err(e) => Err(e),
    }
}

/// Evaluate K_i over the grid; parallel when the `parallel` feature is on.
pub fn eval_grid(i: FamilyIndex, spec: &GridSpec, cfg: &EvalConfig) -> Result<Vec<GridRecord>> {
    #[cfg(feature = "parallel")]
    {
        eval_grid_parallel(i, spec, cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        eval_grid_serial(i, spec, cfg)
    }
}

/// Sequential grid sweep.
pub fn eval_grid_serial(
    i: FamilyIndex,
    spec: &GridSpec,
    cfg: &EvalConfig,
) -> Result<Vec<GridRecord>> {
    spec.validate()?;
    cfg.validate()?;
    spec.points()
        .into_iter()
        .map(|z| eval_point(i, z, cfg))
        .collect()
}

/// Grid sweep fanned out across the rayon pool. Output order and content are
/// identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn eval_grid_parallel(
    i: FamilyIndex,
    spec: &GridSpec,
    cfg: &EvalConfig,
) -> Result<Vec<GridRecord>> {
    spec.validate()?;
    cfg.validate()?;
    spec.points()
        .into_par_iter()
        .map(|z| eval_point(i, z, cfg))
        .collect()
}
