//! Permutation-symmetric functions `f: ℝⁿ → ℝ` with their gradients and
//! Hessians.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tensor::{Matrix, Tensor};

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    /// `Σ x_i`
    Trace,
    /// `Σ x_i²`
    Fro2,
    /// `-Σ ln x_i`, defined for `x > 0`
    LogBarrier,
    /// `Σ_{i<j} x_i x_j`
    Esym2,
    /// `Σ g(x_i)`
    Separable { g: Scalar, g1: Scalar, g2: Scalar },
}

#[derive(Clone)]
pub struct SymmetricFunction {
    name: String,
    kind: Kind,
}

impl fmt::Debug for SymmetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetricFunction").field("name", &self.name).finish()
    }
}

/// Names accepted by [`SymmetricFunction::from_name`].
pub const FUNCTION_NAMES: [&str; 6] = ["trace", "fro2", "logbarrier", "esym2", "separable:exp", "separable:square"];

impl SymmetricFunction {
    pub fn trace() -> Self {
        Self::builtin("trace", Kind::Trace)
    }

    pub fn fro2() -> Self {
        Self::builtin("fro2", Kind::Fro2)
    }

    pub fn log_barrier() -> Self {
        Self::builtin("logbarrier", Kind::LogBarrier)
    }

    pub fn esym2() -> Self {
        Self::builtin("esym2", Kind::Esym2)
    }

    /// `f(x) = Σ g(x_i)` from `g` and its first two derivatives.
    pub fn separable(
        name: impl Into<String>,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SymmetricFunction {
            name: name.into(),
            kind: Kind::Separable {
                g: Arc::new(g),
                g1: Arc::new(g1),
                g2: Arc::new(g2),
            },
        }
    }

    fn builtin(name: &str, kind: Kind) -> Self {
        SymmetricFunction { name: name.into(), kind }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "trace" => Self::trace(),
            "fro2" => Self::fro2(),
            "logbarrier" => Self::log_barrier(),
            "esym2" => Self::esym2(),
            "separable:exp" => Self::separable(name, f64::exp, f64::exp, f64::exp),
            "separable:square" => Self::separable(name, |x| x * x, |x| 2.0 * x, |_| 2.0),
            _ => {
                return Err(Error::Usage(format!(
                    "unknown function '{name}', expected one of {}",
                    FUNCTION_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        if matches!(self.kind, Kind::LogBarrier) && x.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::OutsideDomain {
                function: self.name.clone(),
                point: format!("{x:?} (needs every coordinate > 0)"),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match &self.kind {
            Kind::Trace => x.iter().sum(),
            Kind::Fro2 => x.iter().map(|v| v * v).sum(),
            Kind::LogBarrier => -x.iter().map(|v| v.ln()).sum::<f64>(),
            Kind::Esym2 => {
                let s: f64 = x.iter().sum();
                let q: f64 = x.iter().map(|v| v * v).sum();
                0.5 * (s * s - q)
            }
            Kind::Separable { g, .. } => x.iter().map(|&v| g(v)).sum(),
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_domain(x)?;
        Ok(match &self.kind {
            Kind::Trace => vec![1.0; x.len()],
            Kind::Fro2 => x.iter().map(|v| 2.0 * v).collect(),
            Kind::LogBarrier => x.iter().map(|v| -1.0 / v).collect(),
            Kind::Esym2 => {
                let s: f64 = x.iter().sum();
                x.iter().map(|v| s - v).collect()
            }
            Kind::Separable { g1, .. } => x.iter().map(|&v| g1(v)).collect(),
        })
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Matrix> {
        self.check_domain(x)?;
        let n = x.len();
        Ok(match &self.kind {
            Kind::Trace => Tensor::zeros(2, n),
            Kind::Fro2 => Tensor::identity(n).scale(2.0),
            Kind::LogBarrier => Tensor::diag_matrix(&x.iter().map(|v| 1.0 / (v * v)).collect::<Vec<_>>()),
            Kind::Esym2 => Tensor::from_fn(2, n, |i| f64::from(i[0] != i[1])),
            Kind::Separable { g2, .. } => Tensor::diag_matrix(&x.iter().map(|&v| g2(v)).collect::<Vec<_>>()),
        })
    }
}
