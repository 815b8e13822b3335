//! Dense complex matrix kernels for the 2×2 and 4×4 sizes used everywhere
//! else in the crate.
//!
//! Everything is fixed-size and allocation-free.  Three small eigensolvers
//! live here:
//!
//! * [`eig_hermitian`] — cyclic complex Jacobi for Hermitian 4×4 matrices,
//!   accurate to machine precision and monotone enough to trust for
//!   validation work;
//! * [`eig_rho_rhotilde`] — a Hessenberg + shifted-QR solver for the
//!   non-Hermitian product of a density matrix with its spin-flipped
//!   conjugate, whose spectrum is real and nonnegative in exact arithmetic;
//! * [`singular_values4`] / [`svd2`] — one-sided Jacobi SVD, used where
//!   singular values are the numerically honest way to get at a spectrum
//!   (squaring a matrix costs half the significant digits near zero).
//!
//! The solvers are hand-rolled on purpose: the rest of the crate
//! cross-validates independent computation routes against each other, and
//! that argument is only as strong as our ability to test each route down to
//! the rotation level.

use num_complex::Complex64;

use crate::{tol, Error, Result};

#[inline]
pub(crate) fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    entries: [[Complex64; 2]; 2],
}

impl ComplexMat2 {
    pub fn from_rows(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::from_rows([[C_ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Self::from_rows([[C_ONE, C_ZERO], [C_ZERO, C_ONE]])
    }

    /// The Pauli-Y matrix `[[0, -i], [i, 0]]`.
    pub fn sigma_y() -> Self {
        Self::from_rows([[C_ZERO, cx(0.0, -1.0)], [cx(0.0, 1.0), C_ZERO]])
    }

    pub fn rows(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [[C_ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C_ZERO;
                for k in 0..2 {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                out[i][j] = acc;
            }
        }
        Self::from_rows(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[C_ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.entries[j][i].conj();
            }
        }
        Self::from_rows(out)
    }

    pub fn conj(&self) -> Self {
        let mut out = self.entries;
        for row in &mut out {
            for e in row {
                *e = e.conj();
            }
        }
        Self::from_rows(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.entries;
        for row in &mut out {
            for e in row {
                *e *= factor;
            }
        }
        Self::from_rows(out)
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Max entry of |m − m†|; zero for an exactly Hermitian matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        dev
    }

    /// Eigenvalues of a Hermitian 2×2 matrix, descending.
    pub fn eig_hermitian(&self) -> Result<[f64; 2]> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = self.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian(dev));
        }
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = (self.entries[0][1] + self.entries[1][0].conj()) * 0.5;
        let half_tr = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        Ok([half_tr + rad, half_tr - rad])
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMat2 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i][j]
    }
}

/// A 4×4 complex matrix, row-major.  The workhorse type of the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat4 {
    entries: [[Complex64; 4]; 4],
}

impl ComplexMat4 {
    pub fn from_rows(entries: [[Complex64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::from_rows([[C_ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut out = [[C_ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = C_ONE;
        }
        Self::from_rows(out)
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i][j] = value;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [[C_ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C_ZERO;
                for k in 0..4 {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                out[i][j] = acc;
            }
        }
        Self::from_rows(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.entries;
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += other.entries[i][j];
            }
        }
        Self::from_rows(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.entries;
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] -= other.entries[i][j];
            }
        }
        Self::from_rows(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.entries;
        for row in &mut out {
            for e in row {
                *e *= factor;
            }
        }
        Self::from_rows(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[C_ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.entries[j][i].conj();
            }
        }
        Self::from_rows(out)
    }

    pub fn conj(&self) -> Self {
        let mut out = self.entries;
        for row in &mut out {
            for e in row {
                *e = e.conj();
            }
        }
        Self::from_rows(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = [[C_ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.entries[j][i];
            }
        }
        Self::from_rows(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2] + self.entries[3][3]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                dev = dev.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        dev
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Max entry of |m − m†|; zero for an exactly Hermitian matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                dev = dev.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        dev
    }

    /// Determinant via LU decomposition with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let mut a = self.entries;
        let mut det = C_ONE;
        for k in 0..4 {
            let (pivot, _) = (k..4)
                .map(|i| (i, a[i][k].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty pivot range");
            if a[pivot][k].norm() == 0.0 {
                return C_ZERO;
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..4 {
                let factor = a[i][k] / a[k][k];
                for j in k..4 {
                    let sub = factor * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMat4 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i][j]
    }
}

/// Kronecker product.  Basis ordering is first-factor-major, i.e. the
/// composite index is `2*i + k` for row `i` of `a` and row `k` of `b`, so
/// `kron(σz, I) = diag(1, 1, -1, -1)`.
pub fn kron(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat4 {
    let mut out = [[C_ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    ComplexMat4::from_rows(out)
}

/// Eigendecomposition of a Hermitian 4×4 matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: [f64; 4],
    /// Unitary matrix whose `k`-th column is the eigenvector for `values[k]`.
    pub vectors: ComplexMat4,
}

/// Eigenvalues of a Hermitian matrix, descending.
///
/// The input must be Hermitian to within [`tol::HERMITICITY`] (max entry of
/// `|m − m†|`); it is symmetrized before iteration so the tolerated
/// asymmetry cannot leak into the spectrum.
pub fn eig_hermitian(h: &ComplexMat4) -> Result<[f64; 4]> {
    Ok(eig_hermitian_full(h)?.values)
}

/// Like [`eig_hermitian`] but also accumulates the eigenvectors.
pub fn eig_hermitian_full(h: &ComplexMat4) -> Result<HermitianEigen> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let dev = h.hermiticity_deviation();
    if dev > tol::HERMITICITY {
        return Err(Error::NotHermitian(dev));
    }

    // Symmetrize, then run cyclic complex Jacobi sweeps.
    let mut a = [[C_ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = ComplexMat4::identity().entries;

    let scale = ComplexMat4::from_rows(a).frobenius_norm().max(1e-300);
    for _sweep in 0..40 {
        let mut off = 0.0;
        for p in 0..3 {
            for q in (p + 1)..4 {
                off += 2.0 * a[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let mag = a[p][q].norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Phase-absorbed 2×2 Jacobi rotation: with ph = a_pq/|a_pq|
                // the pivot block becomes real and the classic real-symmetric
                // angle applies.
                let ph = a[p][q] / mag;
                let cph = ph.conj();
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rows p and q of U† A.
                for j in 0..4 {
                    let rp = a[p][j];
                    let rq = a[q][j];
                    a[p][j] = c * rp - s * (ph * rq);
                    a[q][j] = s * rp + c * (ph * rq);
                }
                // Columns p and q of (U† A) U, and of the accumulated V.
                for i in 0..4 {
                    let cp = a[i][p];
                    let cq = a[i][q];
                    a[i][p] = c * cp - s * (cph * cq);
                    a[i][q] = s * cp + c * (cph * cq);

                    let vp = v[i][p];
                    let vq = v[i][q];
                    v[i][p] = c * vp - s * (cph * vq);
                    v[i][q] = s * vp + c * (cph * vq);
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let mut values = [0.0; 4];
    let mut vectors = [[C_ZERO; 4]; 4];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = a[idx][idx].re;
        for row in 0..4 {
            vectors[row][slot] = v[row][idx];
        }
    }
    Ok(HermitianEigen {
        values,
        vectors: ComplexMat4::from_rows(vectors),
    })
}

/// Positive-semidefinite square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are treated as numerical noise and clamped to
/// zero; anything more negative rejects the input with [`Error::NotPsd`].
pub fn psd_sqrt(h: &ComplexMat4) -> Result<ComplexMat4> {
    let eigen = eig_hermitian_full(h)?;
    if eigen.values[3] < -tol::SPECTRUM_REJECT {
        return Err(Error::NotPsd(eigen.values[3]));
    }
    let mut out = ComplexMat4::zero();
    for k in 0..4 {
        let lam = eigen.values[k].max(0.0);
        let root = lam.sqrt();
        if root == 0.0 {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                let term = eigen.vectors[(i, k)] * eigen.vectors[(j, k)].conj() * root;
                out.set(i, j, out[(i, j)] + term);
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of the (generally non-Hermitian) product of a density matrix
/// with its spin-flipped conjugate.
///
/// In exact arithmetic this spectrum is real and nonnegative.  Numerically,
/// real parts in `[-1e-8, 0)` are clamped to zero; an imaginary part larger
/// than 1e-8 in magnitude, or a real part below −1e-8, means the input was
/// not such a product and yields [`Error::SpectrumNotReal`].
///
/// Returns the four eigenvalues in descending order.  Note these are the
/// eigenvalues of the *product* — the quantities entering the concurrence
/// are their square roots, and taking that square root costs half the
/// significant digits near zero.  [`singular_values4`] on the half-product
/// avoids that loss; this route exists as the independent cross-check.
pub fn eig_rho_rhotilde(product: &ComplexMat4) -> Result<[f64; 4]> {
    if !product.is_finite() {
        return Err(Error::NonFinite);
    }
    let raw = eig_general(product);
    let mut values = [0.0f64; 4];
    for (slot, lam) in raw.iter().enumerate() {
        if lam.im.abs() > tol::SPECTRUM_REJECT || lam.re < -tol::SPECTRUM_REJECT {
            return Err(Error::SpectrumNotReal {
                re: lam.re,
                im: lam.im,
            });
        }
        values[slot] = lam.re.max(0.0);
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Eigenvalues of a general complex 4×4 matrix: Householder reduction to
/// Hessenberg form followed by explicitly shifted QR with deflation.
fn eig_general(m: &ComplexMat4) -> [Complex64; 4] {
    let mut a = m.entries;
    let scale = m.frobenius_norm().max(1e-300);

    hessenberg(&mut a);

    let eps = f64::EPSILON;
    let mut hi: usize = 3;
    let mut iters_since_deflation = 0usize;
    let mut total_iters = 0usize;

    loop {
        // Zero out negligible subdiagonal entries.
        for i in 0..3 {
            let thr =
                (eps * (a[i][i].norm() + a[i + 1][i + 1].norm())).max(1e-3 * eps * eps * scale);
            if a[i + 1][i].norm() <= thr {
                a[i + 1][i] = C_ZERO;
            }
        }
        // Deflate converged eigenvalues off the bottom of the active window.
        while hi > 0 && a[hi][hi - 1].norm() == 0.0 {
            hi -= 1;
            iters_since_deflation = 0;
        }
        if hi == 0 {
            break;
        }
        // Locate the top of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 && a[lo][lo - 1].norm() != 0.0 {
            lo -= 1;
        }

        if hi - lo == 1 {
            // Resolve the trailing 2×2 block in closed form and overwrite it
            // with its diagonalization; the rest of the matrix is decoupled.
            let (l1, l2) = eig2(a[lo][lo], a[lo][hi], a[hi][lo], a[hi][hi]);
            a[lo][lo] = l1;
            a[hi][hi] = l2;
            a[hi][lo] = C_ZERO;
            continue;
        }

        total_iters += 1;
        iters_since_deflation += 1;
        if total_iters > 200 {
            // Should be unreachable for 4×4; bail with the current diagonal
            // rather than looping forever.
            break;
        }

        // Wilkinson shift from the trailing 2×2, with an occasional
        // exceptional shift to break symmetry stalls.
        let mu = if iters_since_deflation % 12 == 0 {
            a[hi][hi] + 0.75 * a[hi][hi - 1].norm()
        } else {
            let (l1, l2) = eig2(a[hi - 1][hi - 1], a[hi - 1][hi], a[hi][hi - 1], a[hi][hi]);
            if (l1 - a[hi][hi]).norm() <= (l2 - a[hi][hi]).norm() {
                l1
            } else {
                l2
            }
        };

        for i in lo..=hi {
            a[i][i] -= mu;
        }
        // QR step: Givens rotations zero the subdiagonal (A ← G… A), then are
        // applied from the right (A ← A G†…), restoring Hessenberg form.
        let mut rot = [(0.0f64, C_ZERO); 3];
        for i in lo..hi {
            let (c, s) = givens(a[i][i], a[i + 1][i]);
            rot[i] = (c, s);
            for j in 0..4 {
                let rp = a[i][j];
                let rq = a[i + 1][j];
                a[i][j] = c * rp + s * rq;
                a[i + 1][j] = -s.conj() * rp + c * rq;
            }
        }
        for i in lo..hi {
            let (c, s) = rot[i];
            for r in 0..4 {
                let cp = a[r][i];
                let cq = a[r][i + 1];
                a[r][i] = c * cp + s.conj() * cq;
                a[r][i + 1] = -s * cp + c * cq;
            }
        }
        for i in lo..=hi {
            a[i][i] += mu;
        }
    }

    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

/// In-place unitary reduction to upper Hessenberg form.
fn hessenberg(a: &mut [[Complex64; 4]; 4]) {
    for k in 0..2 {
        // Householder vector for column k, rows k+1..4.
        let mut x = [C_ZERO; 3];
        let len = 3 - k;
        for (slot, x_slot) in x.iter_mut().enumerate().take(len) {
            *x_slot = a[k + 1 + slot][k];
        }
        let norm = x.iter().take(len).map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let phase = if x[0].norm() > 1e-300 {
            x[0] / x[0].norm()
        } else {
            C_ONE
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().take(len).map(|e| e.norm_sqr()).sum::<f64>();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // A ← P A with P = I − β v v† acting on rows k+1..4.
        for j in 0..4 {
            let mut w = C_ZERO;
            for l in 0..len {
                w += v[l].conj() * a[k + 1 + l][j];
            }
            w *= beta;
            for l in 0..len {
                let sub = w * v[l];
                a[k + 1 + l][j] -= sub;
            }
        }
        // A ← A P acting on columns k+1..4.
        for i in 0..4 {
            let mut z = C_ZERO;
            for l in 0..len {
                z += a[i][k + 1 + l] * v[l];
            }
            z *= beta;
            for l in 0..len {
                let sub = z * v[l].conj();
                a[i][k + 1 + l] -= sub;
            }
        }
        // The sub-subdiagonal part of this column is now zero by
        // construction; make it exact.
        for l in 1..len {
            a[k + 1 + l][k] = C_ZERO;
        }
    }
}

/// Eigenvalues of a complex 2×2 `[[a, b], [c, d]]`, larger-magnitude first.
/// The smaller one is recovered from the determinant for accuracy near zero.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let delta = a - d;
    let disc = (delta * delta + 4.0 * b * c).sqrt();
    let z1 = (tr + disc) * 0.5;
    let z2 = (tr - disc) * 0.5;
    let big = if z1.norm() >= z2.norm() { z1 } else { z2 };
    if big.norm() > 1e-300 {
        (big, det / big)
    } else {
        (z1, z2)
    }
}

/// Complex Givens rotation `(c, s)` with `c` real, such that
/// `[[c, s], [-s̄, c]] · [f, g]ᵀ = [r, 0]ᵀ`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, C_ZERO);
    }
    let fn_ = f.norm();
    let d = (fn_ * fn_ + gn * gn).sqrt();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let c = fn_ / d;
    let fs = f / fn_;
    let s = fs * g.conj() / d;
    (c, s)
}

/// Singular values of a 4×4 complex matrix, descending, via one-sided
/// Jacobi: columns are rotated pairwise until mutually orthogonal, and the
/// singular values are the final column norms.  Small singular values come
/// out with absolute accuracy near machine precision, which is the whole
/// point of this routine.
pub fn singular_values4(m: &ComplexMat4) -> [f64; 4] {
    // Work on columns: cols[j][i] = m[i][j].
    let mut cols = [[C_ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            cols[j][i] = m[(i, j)];
        }
    }

    for _sweep in 0..60 {
        let mut converged = true;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = C_ZERO;
                for i in 0..4 {
                    app += cols[p][i].norm_sqr();
                    aqq += cols[q][i].norm_sqr();
                    apq += cols[p][i].conj() * cols[q][i];
                }
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= 1e-15 * (app * aqq).sqrt() {
                    continue;
                }
                converged = false;
                let ph = apq / mag;
                let cph = ph.conj();
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..4 {
                    let cp = cols[p][i];
                    let cq = cols[q][i];
                    cols[p][i] = c * cp - s * (cph * cq);
                    cols[q][i] = s * cp + c * (cph * cq);
                }
            }
        }
        if converged {
            break;
        }
    }

    let mut sigma = [0.0f64; 4];
    for j in 0..4 {
        sigma[j] = cols[j].iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    }
    sigma.sort_by(|a, b| b.total_cmp(a));
    sigma
}

/// Full SVD of a 2×2 complex matrix: `m = u · diag(s) · v†`.
#[derive(Debug, Clone)]
pub struct Svd2 {
    pub u: ComplexMat2,
    pub s: [f64; 2],
    pub v: ComplexMat2,
}

/// One-sided Jacobi SVD of a 2×2 complex matrix.
pub fn svd2(m: &ComplexMat2) -> Svd2 {
    let mut cols = [[m[(0, 0)], m[(1, 0)]], [m[(0, 1)], m[(1, 1)]]];
    let mut v = [[C_ONE, C_ZERO], [C_ZERO, C_ONE]]; // columns of V

    for _ in 0..60 {
        let app = cols[0][0].norm_sqr() + cols[0][1].norm_sqr();
        let aqq = cols[1][0].norm_sqr() + cols[1][1].norm_sqr();
        let apq = cols[0][0].conj() * cols[1][0] + cols[0][1].conj() * cols[1][1];
        let mag = apq.norm();
        if mag <= 1e-300 || mag <= 1e-15 * (app * aqq).sqrt() {
            break;
        }
        let ph = apq / mag;
        let cph = ph.conj();
        let tau = (aqq - app) / (2.0 * mag);
        let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        for i in 0..2 {
            let cp = cols[0][i];
            let cq = cols[1][i];
            cols[0][i] = c * cp - s * (cph * cq);
            cols[1][i] = s * cp + c * (cph * cq);
            let vp = v[0][i];
            let vq = v[1][i];
            v[0][i] = c * vp - s * (cph * vq);
            v[1][i] = s * vp + c * (cph * vq);
        }
    }

    let mut s0 = (cols[0][0].norm_sqr() + cols[0][1].norm_sqr()).sqrt();
    let mut s1 = (cols[1][0].norm_sqr() + cols[1][1].norm_sqr()).sqrt();
    if s1 > s0 {
        cols.swap(0, 1);
        v.swap(0, 1);
        std::mem::swap(&mut s0, &mut s1);
    }

    let u0 = if s0 > 1e-300 {
        [cols[0][0] / s0, cols[0][1] / s0]
    } else {
        [C_ONE, C_ZERO]
    };
    let u1 = if s1 > 1e-300 {
        [cols[1][0] / s1, cols[1][1] / s1]
    } else {
        // Orthonormal complement of u0.
        [-u0[1].conj(), u0[0].conj()]
    };

    Svd2 {
        u: ComplexMat2::from_rows([[u0[0], u1[0]], [u0[1], u1[1]]]),
        s: [s0, s1],
        v: ComplexMat2::from_rows([[v[0][0], v[1][0]], [v[0][1], v[1][1]]]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> Complex64 {
        cx(x, 0.0)
    }

    /// Characteristic polynomial coefficients by Faddeev–LeVerrier:
    /// p(λ) = λ⁴ + c3 λ³ + c2 λ² + c1 λ + c0.
    fn char_poly(m: &ComplexMat4) -> [Complex64; 4] {
        let shifted = |mk: &ComplexMat4, c: Complex64| {
            let mut t = *mk;
            for i in 0..4 {
                t.set(i, i, t[(i, i)] + c);
            }
            m.mul(&t)
        };
        let c3 = -m.trace();
        let m2 = shifted(m, c3);
        let c2 = -m2.trace() * 0.5;
        let m3 = shifted(&m2, c2);
        let c1 = -m3.trace() / 3.0;
        let m4 = shifted(&m3, c1);
        let c0 = -m4.trace() * 0.25;
        [c0, c1, c2, c3]
    }

    fn eval_char_poly(coeffs: &[Complex64; 4], lam: Complex64) -> Complex64 {
        let l2 = lam * lam;
        l2 * l2 + coeffs[3] * l2 * lam + coeffs[2] * l2 + coeffs[1] * lam + coeffs[0]
    }

    #[test]
    fn kron_ordering_matches_first_factor_major_convention() {
        let sz = ComplexMat2::from_rows([[r(1.0), r(0.0)], [r(0.0), r(-1.0)]]);
        let got = kron(&sz, &ComplexMat2::identity());
        let want = [1.0, 1.0, -1.0, -1.0];
        for (i, w) in want.iter().enumerate() {
            assert_abs_diff_eq!(got[(i, i)].re, w, epsilon = 0.0);
        }
        assert_abs_diff_eq!(got.frobenius_norm(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn kron_of_two_sigma_y_is_the_antidiagonal_sign_matrix() {
        let sy = ComplexMat2::sigma_y();
        let got = kron(&sy, &sy);
        let want_antidiag = [-1.0, 1.0, 1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                if j == 3 - i {
                    assert_abs_diff_eq!(got[(i, j)].re, want_antidiag[i], epsilon = 0.0);
                    assert_abs_diff_eq!(got[(i, j)].im, 0.0, epsilon = 0.0);
                } else {
                    assert_eq!(got[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn kron_mixed_product_identity() {
        let a = ComplexMat2::from_rows([[cx(0.3, 0.1), cx(-0.2, 0.4)], [cx(0.0, -1.1), r(0.7)]]);
        let b = ComplexMat2::from_rows([[cx(1.2, -0.3), r(0.5)], [cx(0.1, 0.1), cx(-0.6, 0.2)]]);
        let c = ComplexMat2::from_rows([[r(0.9), cx(0.2, 0.7)], [cx(-0.4, 0.0), cx(0.3, -0.8)]]);
        let d = ComplexMat2::from_rows([[cx(0.0, 0.6), cx(0.8, -0.1)], [r(-1.0), cx(0.2, 0.2)]]);
        let lhs = kron(&a, &b).mul(&kron(&c, &d));
        let rhs = kron(&a.mul(&c), &b.mul(&d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn hermitian_eigenvalues_of_block_diagonal_example() {
        // Blocks [[2, 1], [1, 2]] (spectrum {3, 1}) and [[1, i], [-i, 1]]
        // (spectrum {2, 0}), so the full spectrum is {3, 2, 1, 0}.
        let h = ComplexMat4::from_rows([
            [r(2.0), r(1.0), r(0.0), r(0.0)],
            [r(1.0), r(2.0), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(1.0), cx(0.0, 1.0)],
            [r(0.0), r(0.0), cx(0.0, -1.0), r(1.0)],
        ]);
        let eig = eig_hermitian_full(&h).unwrap();
        let want = [3.0, 2.0, 1.0, 0.0];
        for k in 0..4 {
            assert_abs_diff_eq!(eig.values[k], want[k], epsilon = 1e-13);
        }
        // Residual ‖H v − λ v‖ per eigenpair.
        for k in 0..4 {
            for i in 0..4 {
                let mut hv = C_ZERO;
                for j in 0..4 {
                    hv += h[(i, j)] * eig.vectors[(j, k)];
                }
                let res = hv - eig.values[k] * eig.vectors[(i, k)];
                assert!(res.norm() < 1e-12, "residual {} at ({i},{k})", res.norm());
            }
        }
        // Eigenvector matrix is unitary.
        let vhv = eig.vectors.adjoint().mul(&eig.vectors);
        assert!(vhv.max_abs_diff(&ComplexMat4::identity()) < 1e-13);
    }

    #[test]
    fn eig_hermitian_rejects_asymmetric_and_non_finite_input() {
        let mut bad = ComplexMat4::identity();
        bad.set(0, 1, r(1e-6));
        assert!(matches!(eig_hermitian(&bad), Err(Error::NotHermitian(_))));

        let mut nan = ComplexMat4::identity();
        nan.set(2, 2, cx(f64::NAN, 0.0));
        assert_eq!(eig_hermitian(&nan), Err(Error::NonFinite));
    }

    #[test]
    fn eig_hermitian_accepts_tolerated_asymmetry() {
        let mut h = ComplexMat4::identity();
        h.set(0, 1, r(0.5));
        h.set(1, 0, r(0.5 + 0.5e-10));
        let values = eig_hermitian(&h).unwrap();
        assert_abs_diff_eq!(values[0], 1.5, epsilon = 1e-10);
        assert_abs_diff_eq!(values[3], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn psd_sqrt_squares_back_to_the_input() {
        let h = ComplexMat4::from_rows([
            [r(2.0), r(1.0), r(0.0), r(0.0)],
            [r(1.0), r(2.0), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(1.0), cx(0.0, 1.0)],
            [r(0.0), r(0.0), cx(0.0, -1.0), r(1.0)],
        ]);
        let root = psd_sqrt(&h).unwrap();
        assert!(root.hermiticity_deviation() < 1e-13);
        assert!(root.mul(&root).max_abs_diff(&h) < 1e-9);
    }

    #[test]
    fn psd_sqrt_clamps_noise_but_rejects_genuine_negativity() {
        let mut nearly = ComplexMat4::zero();
        nearly.set(0, 0, r(1.0));
        nearly.set(1, 1, r(-1e-9));
        let root = psd_sqrt(&nearly).unwrap();
        assert_abs_diff_eq!(root[(1, 1)].re, 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(root[(0, 0)].re, 1.0, epsilon = 1e-14);

        let mut bad = ComplexMat4::identity();
        bad.set(3, 3, r(-1e-6));
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotPsd(_))));
    }

    #[test]
    fn general_eigenvalues_of_triangular_matrix_are_its_diagonal() {
        let m = ComplexMat4::from_rows([
            [cx(0.3, 0.4), r(1.0), r(2.0), cx(0.0, 5.0)],
            [r(0.0), cx(-0.7, 0.1), r(3.0), r(1.0)],
            [r(0.0), r(0.0), cx(0.0, -1.5), r(2.0)],
            [r(0.0), r(0.0), r(0.0), r(0.9)],
        ]);
        let mut got = eig_general(&m).to_vec();
        let mut want = vec![cx(0.3, 0.4), cx(-0.7, 0.1), cx(0.0, -1.5), r(0.9)];
        // Match as multisets: pair each computed value with its closest target.
        for g in &mut got {
            let (idx, _) = want
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (*g - **a).norm().total_cmp(&(*g - **b).norm()))
                .unwrap();
            assert!((*g - want[idx]).norm() < 1e-12, "unmatched eigenvalue {g}");
            want.remove(idx);
        }
    }

    #[test]
    fn general_eigenvalues_satisfy_characteristic_polynomial() {
        let m = ComplexMat4::from_rows([
            [cx(0.2, 0.3), cx(1.0, -0.5), cx(0.0, 0.7), r(0.4)],
            [cx(-0.6, 0.0), r(0.1), cx(0.9, 0.9), cx(0.0, -0.2)],
            [r(0.5), cx(-0.3, 0.4), cx(0.0, -0.8), r(1.2)],
            [cx(0.7, 0.1), r(0.0), cx(0.2, 0.2), cx(-0.5, 0.6)],
        ]);
        let coeffs = char_poly(&m);
        let eigs = eig_general(&m);

        let sum: Complex64 = eigs.iter().sum();
        assert!((sum - m.trace()).norm() < 1e-12);
        let prod: Complex64 = eigs.iter().product();
        assert!((prod - m.det()).norm() < 1e-12);
        for lam in eigs {
            assert!(
                eval_char_poly(&coeffs, lam).norm() < 1e-10,
                "characteristic polynomial residual too large at {lam}"
            );
        }
    }

    #[test]
    fn general_eigenvalues_handle_a_defective_block() {
        // Jordan block: eigenvalue 0.5 twice, perturbation O(sqrt(eps)).
        let m = ComplexMat4::from_rows([
            [r(0.5), r(1.0), r(0.0), r(0.0)],
            [r(0.0), r(0.5), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(0.2), r(0.0)],
            [r(0.0), r(0.0), r(0.0), r(0.8)],
        ]);
        let eigs = eig_general(&m);
        let mut near_half = 0;
        for lam in eigs {
            if (lam - r(0.5)).norm() < 1e-6 {
                near_half += 1;
            }
        }
        assert_eq!(near_half, 2);
    }

    #[test]
    fn product_spectrum_of_noisy_bell_state_matrix() {
        // (1−ω)·|Φ⁺⟩⟨Φ⁺| + ω·I/4 at ω = 0.2 is invariant under spin flip, so
        // the product is the square and the spectrum is {0.85², 0.05², 0.05²,
        // 0.05²}.
        let rho = ComplexMat4::from_rows([
            [r(0.45), r(0.0), r(0.0), r(0.4)],
            [r(0.0), r(0.05), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(0.05), r(0.0)],
            [r(0.4), r(0.0), r(0.0), r(0.45)],
        ]);
        let sy = ComplexMat2::sigma_y();
        let flip = kron(&sy, &sy);
        let rho_tilde = flip.mul(&rho.conj()).mul(&flip);
        let vals = eig_rho_rhotilde(&rho.mul(&rho_tilde)).unwrap();
        assert_abs_diff_eq!(vals[0], 0.7225, epsilon = 1e-12);
        for v in &vals[1..] {
            assert_abs_diff_eq!(*v, 0.0025, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_spectrum_rejects_genuinely_complex_input() {
        // A rotation-like matrix with eigenvalues e^{±iθ} must be refused.
        let m = ComplexMat4::from_rows([
            [r(0.8), r(-0.6), r(0.0), r(0.0)],
            [r(0.6), r(0.8), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(1.0), r(0.0)],
            [r(0.0), r(0.0), r(0.0), r(1.0)],
        ]);
        assert!(matches!(
            eig_rho_rhotilde(&m),
            Err(Error::SpectrumNotReal { .. })
        ));
    }

    #[test]
    fn product_spectrum_clamps_tiny_negative_real_parts() {
        let m = ComplexMat4::from_rows([
            [r(-1e-9), r(0.0), r(0.0), r(0.0)],
            [r(0.0), r(0.5), r(0.0), r(0.0)],
            [r(0.0), r(0.0), r(0.25), r(0.0)],
            [r(0.0), r(0.0), r(0.0), r(0.0)],
        ]);
        let vals = eig_rho_rhotilde(&m).unwrap();
        assert_eq!(vals[3], 0.0);
        assert_eq!(vals[2], 0.0);
    }

    #[test]
    fn singular_values_match_gram_spectrum() {
        let m = ComplexMat4::from_rows([
            [cx(0.4, 0.1), cx(-0.2, 0.3), r(0.0), cx(0.5, -0.5)],
            [r(0.9), cx(0.0, 0.2), cx(0.1, -0.7), r(0.3)],
            [cx(-0.3, 0.6), r(0.2), cx(0.8, 0.0), cx(0.0, 0.4)],
            [r(0.1), cx(0.6, -0.1), cx(-0.4, 0.2), r(0.7)],
        ]);
        let sv = singular_values4(&m);
        let gram_eigs = eig_hermitian(&m.adjoint().mul(&m)).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(sv[k] * sv[k], gram_eigs[k], epsilon = 1e-12);
        }
        assert!(sv[0] >= sv[1] && sv[1] >= sv[2] && sv[2] >= sv[3]);
    }

    #[test]
    fn singular_values_of_rank_one_matrix_are_exactly_one_and_zeros() {
        // Outer product u v† has a single singular value ‖u‖‖v‖.
        let u = [cx(0.5, 0.5), r(0.5), cx(0.0, -0.5), r(0.0)];
        let v = [r(0.6), cx(0.0, 0.8), r(0.0), r(0.0)];
        let mut m = ComplexMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, u[i] * v[j].conj());
            }
        }
        let sv = singular_values4(&m);
        assert_abs_diff_eq!(sv[0], 1.0, epsilon = 1e-14);
        // The small values must be *absolutely* tiny — this is what the
        // one-sided method buys over forming the Gram matrix.
        for s in &sv[1..] {
            assert!(*s < 1e-14, "trailing singular value {s} not near zero");
        }
    }

    #[test]
    fn svd2_reconstructs_and_is_unitary() {
        let m = ComplexMat2::from_rows([[cx(0.7, -0.2), cx(0.1, 0.9)], [r(-0.4), cx(0.3, 0.3)]]);
        let svd = svd2(&m);
        assert!(svd.s[0] >= svd.s[1] && svd.s[1] >= 0.0);

        let id2 = ComplexMat2::identity();
        let uu = svd.u.adjoint().mul(&svd.u);
        let vv = svd.v.adjoint().mul(&svd.v);
        let sigma = ComplexMat2::from_rows([[r(svd.s[0]), r(0.0)], [r(0.0), r(svd.s[1])]]);
        let rebuilt = svd.u.mul(&sigma).mul(&svd.v.adjoint());
        for i in 0..2 {
            for j in 0..2 {
                assert!((uu[(i, j)] - id2[(i, j)]).norm() < 1e-14);
                assert!((vv[(i, j)] - id2[(i, j)]).norm() < 1e-14);
                assert!((rebuilt[(i, j)] - m[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn svd2_of_rank_one_matrix_keeps_an_orthonormal_basis() {
        let m = ComplexMat2::from_rows([[cx(0.6, 0.0), cx(0.0, 0.6)], [r(0.8), cx(0.0, 0.8)]]);
        let svd = svd2(&m);
        assert!(svd.s[1] < 1e-15);
        let uu = svd.u.adjoint().mul(&svd.u);
        assert!((uu[(0, 1)]).norm() < 1e-14);
        assert_abs_diff_eq!(uu[(1, 1)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn determinant_of_a_known_matrix() {
        let mut m = ComplexMat4::identity();
        m.set(0, 0, cx(0.0, 2.0));
        m.set(0, 3, r(1.0));
        m.set(3, 0, r(1.0));
        m.set(3, 3, r(1.0));
        // det of [[2i, 1], [1, 1]] block times 1 times 1 = 2i − 1.
        let d = m.det();
        assert!((d - cx(-1.0, 2.0)).norm() < 1e-14);
    }
}
