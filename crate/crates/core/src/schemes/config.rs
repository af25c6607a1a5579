use super::SchemeError;
use crate::linsolve::SolverOptions;
use crate::mac::{MacGrid, ScalarField, Varpi};
use std::fmt;
use std::str::FromStr;

/// Scheme catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// First-order artificial compressibility with coupled grad-div.
    Ac1,
    /// Gauss-Seidel grad-div splitting, 2D.
    Gs2d,
    /// Jacobi grad-div splitting, 2D.
    Jacobi2d,
    /// Jacobi splitting with own-direction factor `d`.
    JacobiNd,
    /// Gauss-Seidel grad-div splitting, 3D.
    Gs3d,
    /// Gauss-Seidel 3D with the stabilising own-direction perturbation.
    Gs3dModified,
    /// Factored direction splitting, 2D.
    Dirsplit1,
    /// Second-order defect correction of `Dirsplit1`.
    DirsplitDefect2,
    /// Second-order BDF2 bootstrap of the Gauss-Seidel splitting.
    Bdf2Bootstrap,
    /// Third-order defect correction with coupled grad-div.
    Defect3Coupled,
    /// Third-order defect correction with split grad-div.
    Defect3Split,
    /// Stages 0 and 1 of `Defect3Coupled`.
    Defect2Coupled,
    /// Stages 0 and 1 of `Defect3Split`.
    Defect2Split,
}

impl SchemeId {
    pub const ALL: [SchemeId; 13] = [
        SchemeId::Ac1,
        SchemeId::Gs2d,
        SchemeId::Jacobi2d,
        SchemeId::JacobiNd,
        SchemeId::Gs3d,
        SchemeId::Gs3dModified,
        SchemeId::Dirsplit1,
        SchemeId::DirsplitDefect2,
        SchemeId::Bdf2Bootstrap,
        SchemeId::Defect3Coupled,
        SchemeId::Defect3Split,
        SchemeId::Defect2Coupled,
        SchemeId::Defect2Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Ac1 => "ac1",
            SchemeId::Gs2d => "gs2d",
            SchemeId::Jacobi2d => "jacobi2d",
            SchemeId::JacobiNd => "jacobi_nd",
            SchemeId::Gs3d => "gs3d",
            SchemeId::Gs3dModified => "gs3d_modified",
            SchemeId::Dirsplit1 => "dirsplit1",
            SchemeId::DirsplitDefect2 => "dirsplit_defect2",
            SchemeId::Bdf2Bootstrap => "bdf2_bootstrap",
            SchemeId::Defect3Coupled => "defect3_coupled",
            SchemeId::Defect3Split => "defect3_split",
            SchemeId::Defect2Coupled => "defect2_coupled",
            SchemeId::Defect2Split => "defect2_split",
        }
    }

    /// Dimensions the scheme is defined for.
    pub fn supports_dim(self, dim: usize) -> bool {
        match self {
            SchemeId::Gs2d | SchemeId::Jacobi2d | SchemeId::Dirsplit1 | SchemeId::DirsplitDefect2 => dim == 2,
            SchemeId::Gs3d | SchemeId::Gs3dModified => dim == 3,
            SchemeId::Bdf2Bootstrap => dim == 2 || dim == 3,
            _ => dim == 2 || dim == 3,
        }
    }

    /// Nominal temporal order of the reported solution.
    pub fn nominal_order(self) -> usize {
        match self {
            SchemeId::Defect3Coupled | SchemeId::Defect3Split => 3,
            SchemeId::DirsplitDefect2
            | SchemeId::Bdf2Bootstrap
            | SchemeId::Defect2Coupled
            | SchemeId::Defect2Split => 2,
            _ => 1,
        }
    }

    /// Number of steps the reported solution trails the newest level.
    pub fn output_lag(self) -> usize {
        match self {
            SchemeId::Defect3Coupled | SchemeId::Defect3Split => 2,
            SchemeId::Defect2Coupled | SchemeId::Defect2Split => 1,
            _ => 0,
        }
    }

    /// Schemes whose pressure lives at half-integer levels.
    pub fn half_step_pressure(self) -> bool {
        matches!(self, SchemeId::Dirsplit1 | SchemeId::DirsplitDefect2)
    }

    /// Schemes that require a constant grad-div coefficient.
    pub fn needs_constant_varpi(self) -> bool {
        matches!(
            self,
            SchemeId::Dirsplit1
                | SchemeId::DirsplitDefect2
                | SchemeId::Bdf2Bootstrap
                | SchemeId::Defect3Split
                | SchemeId::Defect2Split
        )
    }

    pub fn is_defect(self) -> bool {
        matches!(
            self,
            SchemeId::Defect3Coupled | SchemeId::Defect3Split | SchemeId::Defect2Coupled | SchemeId::Defect2Split
        )
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = SchemeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| SchemeError::Config(format!("unknown scheme '{s}'")))
    }
}

/// Which explicit mixed-derivative corrections the split defect-correction
/// stages carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossCorrection {
    /// Both the lagged `−C△` increment of the previous stage and the
    /// divided-difference term `C△ du`.
    Both,
    /// Only the lagged increment of the previous stage.
    LaggedOnly,
    /// Only the divided-difference term.
    DividedDifference,
    /// The lagged increment of the previous stage divided by `dt`, i.e.
    /// `C△ du` one level behind; no other term.
    LaggedDivided,
    /// `C△ du` at the newest level plus `−C△ d²u₀` in the last stage.
    Centered,
}

impl CrossCorrection {
    pub const ALL: [CrossCorrection; 5] =
        [Self::Both, Self::LaggedOnly, Self::DividedDifference, Self::LaggedDivided, Self::Centered];

    pub fn name(self) -> &'static str {
        match self {
            Self::Both => "both",
            Self::LaggedOnly => "lagged",
            Self::DividedDifference => "divided",
            Self::LaggedDivided => "lagged-divided",
            Self::Centered => "centered",
        }
    }
}

impl fmt::Display for CrossCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrossCorrection {
    type Err = SchemeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(Self::Both),
            "lagged" => Ok(Self::LaggedOnly),
            "divided" => Ok(Self::DividedDifference),
            "lagged-divided" => Ok(Self::LaggedDivided),
            "centered" => Ok(Self::Centered),
            _ => Err(SchemeError::Config(format!("unknown cross correction '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig {
    pub dim: usize,
    pub dt: f64,
    pub nu: f64,
    pub lambda: f64,
    pub chi: f64,
    /// Optional spatially varying `λ(x)` on cell centres, replacing `lambda`.
    pub lambda_field: Option<ScalarField>,
    pub scheme: SchemeId,
    pub nonlinear: bool,
    pub solver: SolverOptions,
    pub cross_correction: CrossCorrection,
}

impl SchemeConfig {
    pub fn new(scheme: SchemeId, dim: usize, dt: f64, nu: f64) -> Self {
        Self {
            dim,
            dt,
            nu,
            lambda: 0.0,
            chi: 1.0,
            lambda_field: None,
            scheme,
            nonlinear: false,
            solver: SolverOptions::default(),
            cross_correction: CrossCorrection::LaggedDivided,
        }
    }

    /// `ϖ = λ + χ`.
    pub fn varpi(&self) -> Varpi {
        match &self.lambda_field {
            None => Varpi::Const(self.lambda + self.chi),
            Some(l) => {
                let mut f = l.clone();
                f.data_mut().iter_mut().for_each(|v| *v += self.chi);
                Varpi::Field(f)
            }
        }
    }

    pub fn validate(&self, grid: &MacGrid) -> Result<(), SchemeError> {
        let bad = |m: String| Err(SchemeError::Config(m));
        if grid.dim() != self.dim {
            return bad(format!("grid is {}D but config is {}D", grid.dim(), self.dim));
        }
        if !self.scheme.supports_dim(self.dim) {
            return bad(format!("scheme {} is not defined in {}D", self.scheme, self.dim));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        if !(self.chi > 0.0 && self.chi.is_finite()) {
            return bad(format!("chi must be positive, got {}", self.chi));
        }
        if !(self.lambda >= 0.0) {
            return bad(format!("lambda must be nonnegative, got {}", self.lambda));
        }
        if let Some(l) = &self.lambda_field {
            if self.scheme.needs_constant_varpi() {
                return bad(format!("scheme {} needs a constant grad-div coefficient", self.scheme));
            }
            Varpi::Field(l.clone()).check(grid)?;
            if !(Varpi::Field(l.clone()).min() >= 0.0) {
                return bad("lambda field must be nonnegative".into());
            }
        }
        Ok(())
    }
}
