//! Dirichlet discretizations of the dilated operators on a symmetric
//! interval, plus the on-disk matrix dump format.

use crate::angle::ComplexAngle;
use crate::error::{Error, Result};
use crate::potential::Potential;
use ndarray::Array2;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

/// Uniform Dirichlet grid on [-L, L] with N interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::validation("grid.L", "half-width must be positive"));
        }
        if n < 16 {
            return Err(Error::validation("grid.N", "need at least 16 interior points"));
        }
        Ok(Grid { l, n })
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.l / (self.n as f64 + 1.0)
    }

    /// Interior nodes -L + j h for j = 1..=N.
    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.n).map(|j| -self.l + j as f64 * h).collect()
    }
}

/// Finite-difference order for the kinetic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Fd2,
    Fd4,
}

/// Which dilated operator to assemble: the similarity-transformed operator
/// itself, or its version with the kinetic prefactor cleared.
///
/// `Full` is e^(-2 theta) (H0 + e^(2 theta) V_theta); `Tilde` drops the
/// leading factor. The two spectra coincide after rotating by e^(-2 theta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Full,
    Tilde,
}

/// Dense matrix of the Dirichlet Laplacian -d^2/dx^2 for the given scheme.
pub fn laplacian_matrix(grid: Grid, scheme: Scheme) -> Array2<f64> {
    let n = grid.n();
    let h2 = grid.spacing().powi(2);
    let mut a = Array2::<f64>::zeros((n, n));
    match scheme {
        Scheme::Fd2 => {
            let s = 1.0 / h2;
            for i in 0..n {
                a[[i, i]] = 2.0 * s;
                if i + 1 < n {
                    a[[i, i + 1]] = -s;
                    a[[i + 1, i]] = -s;
                }
            }
        }
        Scheme::Fd4 => {
            let s = 1.0 / (12.0 * h2);
            // skewed closures at the boundary-adjacent rows keep fourth-order
            // accuracy without ghost points; they are exact through degree 5
            let top: [f64; 5] = [15.0, 4.0, -14.0, 6.0, -1.0];
            for (j, &c) in top.iter().enumerate() {
                a[[0, j]] = c * s;
            }
            let second: [f64; 4] = [-16.0, 30.0, -16.0, 1.0];
            for (j, &c) in second.iter().enumerate() {
                a[[1, j]] = c * s;
            }
            let interior: [f64; 5] = [1.0, -16.0, 30.0, -16.0, 1.0];
            for i in 2..n.saturating_sub(2) {
                for (k, &c) in interior.iter().enumerate() {
                    a[[i, i - 2 + k]] = c * s;
                }
            }
            for (j, &c) in second.iter().enumerate() {
                a[[n - 2, n - 1 - j]] = c * s;
            }
            for (j, &c) in top.iter().enumerate() {
                a[[n - 1, n - 1 - j]] = c * s;
            }
        }
    }
    a
}

#[derive(Debug, Clone)]
pub(crate) enum Repr {
    /// Real symmetric tridiagonal: FD2 kinetic term plus a real diagonal.
    /// FD4 never lands here; its boundary closures are asymmetric.
    TridiagonalReal { diag: Vec<f64>, offdiag: Vec<f64> },
    DenseComplex(Array2<Complex64>),
}

/// An assembled matrix with its assembly metadata.
#[derive(Debug, Clone)]
pub struct DilatedHamiltonian {
    theta: ComplexAngle,
    form: Form,
    grid: Grid,
    scheme: Scheme,
    potential: String,
    repr: Repr,
}

/// Assemble the chosen form of the dilated operator on the grid.
pub fn assemble(
    grid: Grid,
    scheme: Scheme,
    v: &Potential,
    theta: ComplexAngle,
    form: Form,
) -> Result<DilatedHamiltonian> {
    let points = grid.points();
    let mut samples = Vec::with_capacity(points.len());
    for &x in &points {
        samples.push(v.evaluate_dilated(theta, x)?);
    }
    let phi = theta.phi();
    let real_potential = samples.iter().all(|z| z.im == 0.0);

    // at angle zero with a real potential both forms are one real matrix;
    // only the second-order stencil is symmetric, so the fourth-order one
    // (asymmetric boundary rows) still goes through the general solver
    let repr = if phi == 0.0 && real_potential && scheme == Scheme::Fd2 {
        let h2 = grid.spacing().powi(2);
        let diag: Vec<f64> = samples.iter().map(|z| 2.0 / h2 + z.re).collect();
        let offdiag = vec![-1.0 / h2; grid.n() - 1];
        Repr::TridiagonalReal { diag, offdiag }
    } else {
        let lap = laplacian_matrix(grid, scheme);
        let e2t = theta.squared_factor();
        let n = grid.n();
        let mut tilde = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                tilde[[i, j]] = Complex64::new(lap[[i, j]], 0.0);
            }
            tilde[[i, i]] += e2t * samples[i];
        }
        let a = match form {
            Form::Tilde => tilde,
            Form::Full => {
                let back = theta.inverse_squared_factor();
                tilde.mapv(|z| back * z)
            }
        };
        Repr::DenseComplex(a)
    };

    Ok(DilatedHamiltonian {
        theta,
        form,
        grid,
        scheme,
        potential: v.describe(),
        repr,
    })
}

impl DilatedHamiltonian {
    pub fn theta(&self) -> ComplexAngle {
        self.theta
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn potential_description(&self) -> &str {
        &self.potential
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    /// Materialize the matrix as dense complex, whatever the internal form.
    pub fn dense(&self) -> Array2<Complex64> {
        match &self.repr {
            Repr::TridiagonalReal { diag, offdiag } => {
                let n = diag.len();
                let mut a = Array2::<Complex64>::zeros((n, n));
                for i in 0..n {
                    a[[i, i]] = Complex64::new(diag[i], 0.0);
                    if i + 1 < n {
                        a[[i, i + 1]] = Complex64::new(offdiag[i], 0.0);
                        a[[i + 1, i]] = Complex64::new(offdiag[i], 0.0);
                    }
                }
                a
            }
            Repr::DenseComplex(c) => c.clone(),
        }
    }

    /// Max-row-sum norm, computed without materializing the dense form.
    pub fn inf_norm(&self) -> f64 {
        match &self.repr {
            Repr::TridiagonalReal { diag, offdiag } => {
                let n = diag.len();
                (0..n)
                    .map(|i| {
                        let mut row = diag[i].abs();
                        if i > 0 {
                            row += offdiag[i - 1].abs();
                        }
                        if i + 1 < n {
                            row += offdiag[i].abs();
                        }
                        row
                    })
                    .fold(0.0, f64::max)
            }
            Repr::DenseComplex(c) => c
                .rows()
                .into_iter()
                .map(|row| row.iter().map(|v| v.norm()).sum())
                .fold(0.0, f64::max),
        }
    }

    /// Write the dense matrix to a binary file: little-endian u64 N, f64 L,
    /// f64 phi, then N*N (re, im) f64 pairs in row-major order.
    pub fn dump_matrix(&self, path: &Path) -> Result<()> {
        let a = self.dense();
        let n = a.nrows();
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(&(n as u64).to_le_bytes())?;
        f.write_all(&self.grid.half_width().to_le_bytes())?;
        f.write_all(&self.theta.phi().to_le_bytes())?;
        for i in 0..n {
            for j in 0..n {
                f.write_all(&a[[i, j]].re.to_le_bytes())?;
                f.write_all(&a[[i, j]].im.to_le_bytes())?;
            }
        }
        f.flush()?;
        Ok(())
    }
}

/// Read a matrix dump back: (N, L, phi, matrix).
pub fn read_matrix_dump(path: &Path) -> Result<(usize, f64, f64, Array2<Complex64>)> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut b8 = [0u8; 8];
    f.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    f.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    f.read_exact(&mut b8)?;
    let phi = f64::from_le_bytes(b8);
    if n == 0 || n > 100_000 {
        return Err(Error::validation("dump", "matrix dimension out of range"));
    }
    let mut a = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            f.read_exact(&mut b8)?;
            let re = f64::from_le_bytes(b8);
            f.read_exact(&mut b8)?;
            let im = f64::from_le_bytes(b8);
            a[[i, j]] = Complex64::new(re, im);
        }
    }
    Ok((n, l, phi, a))
}
