use std::fmt;
use std::str::FromStr;

use heatopt_core::{TargetKind, TargetSpec};

use crate::StudyError;

/// Default cap on `N_t * M_x` per level.
pub const DEFAULT_MAX_DOFS: usize = 40_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// `n_t = n_x`, so `h_t ~ h_x`.
    Uniform,
    /// `n_t = n_x^2`, so `h_t ~ h_x^2`.
    Parabolic,
}

impl Scaling {
    pub fn n_t(self, n_x: usize) -> usize {
        match self {
            Scaling::Uniform => n_x,
            Scaling::Parabolic => n_x * n_x,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scaling::Uniform => "uniform",
            Scaling::Parabolic => "parabolic",
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scaling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Scaling::Uniform),
            "parabolic" => Ok(Scaling::Parabolic),
            other => Err(format!("unknown scaling '{other}' (expected uniform or parabolic)")),
        }
    }
}

/// One refinement study: a target, a scaling rule and the spatial levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub target: TargetKind,
    pub dim: usize,
    pub scaling: Scaling,
    pub levels: Vec<usize>,
    pub t_end: f64,
    pub max_dofs: usize,
}

impl ExperimentPlan {
    pub fn new(target: TargetKind, scaling: Scaling, levels: Vec<usize>) -> Self {
        Self {
            target,
            dim: TargetSpec::new(target, 1.0).dim(),
            scaling,
            levels,
            t_end: 1.0,
            max_dofs: DEFAULT_MAX_DOFS,
        }
    }

    pub fn target_spec(&self) -> TargetSpec {
        TargetSpec::new(self.target, self.t_end)
    }

    /// `(n_x - 1)^dim * n_t`.
    pub fn dofs(&self, n_x: usize) -> usize {
        (n_x - 1).pow(self.dim as u32) * self.scaling.n_t(n_x)
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        if self.levels.is_empty() {
            return Err(StudyError::NoLevels);
        }
        if self.levels[0] < 2 || self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StudyError::BadLevels(self.levels.clone()));
        }
        let expected = self.target_spec().dim();
        if self.dim != expected {
            return Err(StudyError::Dimension {
                target: self.target,
                expected,
                got: self.dim,
            });
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(StudyError::Horizon(self.t_end));
        }
        for &nx in &self.levels {
            if self.target == TargetKind::Discontinuous && nx % 4 != 0 {
                return Err(StudyError::Misaligned(nx));
            }
            let dofs = self.dofs(nx);
            if dofs > self.max_dofs {
                return Err(StudyError::OverBudget {
                    nx,
                    dofs,
                    limit: self.max_dofs,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_accounting() {
        let plan = ExperimentPlan::new(TargetKind::Smooth, Scaling::Uniform, vec![4, 8]);
        assert_eq!(plan.dofs(8), 7 * 7 * 7 * 8);
        let plan = ExperimentPlan::new(TargetKind::Anisotropic, Scaling::Parabolic, vec![4]);
        assert_eq!(plan.dofs(4), 27 * 16);
    }

    #[test]
    fn validation() {
        assert!(ExperimentPlan::new(TargetKind::Smooth, Scaling::Uniform, vec![])
            .validate()
            .is_err());
        assert!(ExperimentPlan::new(TargetKind::Smooth, Scaling::Uniform, vec![1, 4])
            .validate()
            .is_err());
        assert!(
            ExperimentPlan::new(TargetKind::Discontinuous, Scaling::Uniform, vec![4, 6])
                .validate()
                .is_err()
        );
        assert!(
            ExperimentPlan::new(TargetKind::Discontinuous, Scaling::Uniform, vec![4, 8])
                .validate()
                .is_ok()
        );
        let mut p = ExperimentPlan::new(TargetKind::Anisotropic, Scaling::Parabolic, vec![4, 8, 16, 32]);
        p.max_dofs = 1_000_000;
        assert!(matches!(p.validate(), Err(StudyError::OverBudget { nx: 32, .. })));
        let mut p = ExperimentPlan::new(TargetKind::TurningWave, Scaling::Uniform, vec![4]);
        p.dim = 3;
        assert!(matches!(p.validate(), Err(StudyError::Dimension { expected: 2, .. })));
    }

    #[test]
    fn scaling_names_round_trip() {
        for s in [Scaling::Uniform, Scaling::Parabolic] {
            assert_eq!(s.name().parse::<Scaling>(), Ok(s));
        }
        assert!("diagonal".parse::<Scaling>().is_err());
    }
}
