use super::SolveError;

/// Tridiagonal matrix stored by diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiag {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiag {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self, SolveError> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(SolveError::Param(format!(
                "tridiagonal sizes inconsistent: lower {}, diag {n}, upper {}",
                lower.len(),
                upper.len()
            )));
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn identity(n: usize) -> Self {
        Self { lower: vec![0.0; n.saturating_sub(1)], diag: vec![1.0; n], upper: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Forward elimination; returns the reusable factorisation.
    pub fn factor(&self) -> Result<TridiagFactor, SolveError> {
        let n = self.len();
        let scale = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let threshold = 1e-14 * scale;
        let mut cp = vec![0.0; n];
        let mut inv = vec![0.0; n];
        let mut denom = self.diag[0];
        for i in 0..n {
            if i > 0 {
                denom = self.diag[i] - self.lower[i - 1] * cp[i - 1];
            }
            if !(denom.abs() > threshold) {
                return Err(SolveError::Singular { row: i, pivot: denom });
            }
            inv[i] = 1.0 / denom;
            if i + 1 < n {
                cp[i] = self.upper[i] * inv[i];
            }
        }
        Ok(TridiagFactor { lower: self.lower.clone(), cp, inv })
    }
}

/// LU factors of a [`Tridiag`] (Thomas algorithm, no pivoting).
#[derive(Clone, Debug)]
pub struct TridiagFactor {
    lower: Vec<f64>,
    cp: Vec<f64>,
    inv: Vec<f64>,
}

impl TridiagFactor {
    pub fn len(&self) -> usize {
        self.inv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv.is_empty()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.inv.len();
        debug_assert_eq!(rhs.len(), n);
        rhs[0] *= self.inv[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i - 1] * rhs[i - 1]) * self.inv[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.cp[i] * rhs[i + 1];
        }
    }
}

/// Solves `m x = rhs` in O(n).
pub fn thomas_solve(m: &Tridiag, rhs: &[f64]) -> Result<Vec<f64>, SolveError> {
    if rhs.len() != m.len() {
        return Err(SolveError::Param(format!(
            "rhs length {} does not match matrix size {}",
            rhs.len(),
            m.len()
        )));
    }
    let f = m.factor()?;
    let mut x = rhs.to_vec();
    f.solve_in_place(&mut x);
    Ok(x)
}
