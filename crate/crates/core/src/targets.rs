//! Analytic target states used in the convergence studies.

use core::f64::consts::{PI, SQRT_2};
use core::fmt;
use core::str::FromStr;

use crate::math::{cos, exp, sin, sqrt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetKind {
    /// `t^2 prod x_i (1 - x_i)` in three space dimensions.
    Smooth,
    /// `sqrt(t (T - t)) prod x_i (1 - x_i)` in three space dimensions.
    Anisotropic,
    /// Indicator of `(1/4, 3/4)^3`, constant in time.
    Discontinuous,
    /// Two logistic fronts rotating in the plane, cut off outside
    /// `(1/8, 7/8)^2 x (1/8, 1)`.
    TurningWave,
}

impl TargetKind {
    pub const ALL: [TargetKind; 4] = [
        TargetKind::Smooth,
        TargetKind::Anisotropic,
        TargetKind::Discontinuous,
        TargetKind::TurningWave,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Smooth => "smooth",
            TargetKind::Anisotropic => "anisotropic",
            TargetKind::Discontinuous => "discontinuous",
            TargetKind::TurningWave => "turning-wave",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown target (expected smooth, anisotropic, discontinuous or turning-wave)")]
pub struct UnknownTarget;

impl FromStr for TargetKind {
    type Err = UnknownTarget;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TargetKind::ALL.into_iter().find(|k| k.name() == s).ok_or(UnknownTarget)
    }
}

/// A target function together with its time horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec {
    pub kind: TargetKind,
    pub t_end: f64,
}

const DISC_LO: f64 = 0.25;
const DISC_HI: f64 = 0.75;
const WAVE_LO: f64 = 1.0 / 8.0;
const WAVE_HI: f64 = 7.0 / 8.0;
const WAVE_START: f64 = 1.0 / 8.0;

impl TargetSpec {
    pub fn new(kind: TargetKind, t_end: f64) -> Self {
        Self { kind, t_end }
    }

    /// Spatial dimension the target is defined on.
    pub fn dim(&self) -> usize {
        match self.kind {
            TargetKind::TurningWave => 2,
            _ => 3,
        }
    }

    /// Expected `L^2(Q)` convergence order for `n_t = n_x`.
    pub fn expected_eoc_uniform(&self) -> f64 {
        match self.kind {
            TargetKind::Smooth => 2.0,
            TargetKind::Anisotropic => 1.0,
            TargetKind::Discontinuous | TargetKind::TurningWave => 0.5,
        }
    }

    /// Expected `L^2(Q)` convergence order for `n_t = n_x^2`.
    pub fn expected_eoc_parabolic(&self) -> f64 {
        match self.kind {
            TargetKind::Smooth | TargetKind::Anisotropic => 2.0,
            TargetKind::Discontinuous | TargetKind::TurningWave => 0.5,
        }
    }

    /// Coordinates at which the target jumps, per space axis.
    pub fn space_jumps(&self) -> &'static [f64] {
        match self.kind {
            TargetKind::Discontinuous => &[DISC_LO, DISC_HI],
            TargetKind::TurningWave => &[WAVE_LO, WAVE_HI],
            _ => &[],
        }
    }

    /// Times at which the target jumps.
    pub fn time_jumps(&self) -> &'static [f64] {
        match self.kind {
            TargetKind::TurningWave => &[WAVE_START],
            _ => &[],
        }
    }

    /// True if the target's time derivative blows up at `t = 0` and `t = T`.
    pub fn has_endpoint_singularity(&self) -> bool {
        self.kind == TargetKind::Anisotropic
    }

    /// Point evaluation; `x` holds `dim()` coordinates.
    pub fn evaluate(&self, x: &[f64], t: f64) -> f64 {
        match self.kind {
            TargetKind::Smooth => t * t * bubble(x),
            TargetKind::Anisotropic => sqrt((t * (self.t_end - t)).max(0.0)) * bubble(x),
            TargetKind::Discontinuous => {
                if x.iter().all(|&xi| (DISC_LO..=DISC_HI).contains(&xi)) {
                    1.0
                } else {
                    0.0
                }
            }
            TargetKind::TurningWave => turning_wave(x[0], x[1], t),
        }
    }
}

fn bubble(x: &[f64]) -> f64 {
    x.iter().map(|&xi| xi * (1.0 - xi)).product()
}

fn turning_wave(x1: f64, x2: f64, t: f64) -> f64 {
    let inside = x1 > WAVE_LO && x1 < WAVE_HI && x2 > WAVE_LO && x2 < WAVE_HI && t > WAVE_START;
    if !inside {
        return 0.0;
    }
    let g = 2.0 * PI / 3.0 * t.min(0.75);
    let (c, s) = (cos(g), sin(g));
    let a = (c * (70.0 / 3.0 - 70.0 * x1) + s * (70.0 / 3.0 - 70.0 * x2)) / SQRT_2;
    let b = (c * (70.0 * x1 - 140.0 / 3.0) + s * (70.0 * x2 - 140.0 / 3.0)) / SQRT_2;
    1.0 / (1.0 + exp(a)) + 1.0 / (1.0 + exp(b)) - 1.0
}

/// Cubic reaction `R(u) = u (u + 1) (u - 1/4)`.
pub fn reaction(u: f64) -> f64 {
    u * (u + 1.0) * (u - 0.25)
}
