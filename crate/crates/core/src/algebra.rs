//! The quotient algebra A = C[z]/<p>: residue classes as coefficient vectors,
//! the element H(w) = (z-w)(wz-1), the multiplication operator matrix M(w) and
//! its determinant polynomial, plus structure-constant algebras with Krylov
//! minimal polynomials.

use crate::poly::{cx, Cx, Poly, PolyError};
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("elements live in different quotient algebras")]
    ModulusMismatch,
    #[error("structure tensor has wrong size: expected {expected}, got {got}")]
    TensorSize { expected: usize, got: usize },
    #[error("structure constants are not commutative (entry {i},{j},{k})")]
    NotCommutative { i: usize, j: usize, k: usize },
    #[error("designated unit does not act as the identity")]
    BadUnit,
    #[error("element vector has wrong length")]
    ElementLength,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Residue class in C[z]/<p>, stored as its coordinate vector in the basis
/// {1, z, ..., z^{n-1}}. The vector is the inverse coordinate map applied to
/// the class.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    coeffs: Vec<Cx>,
    modulus: Poly,
}

impl AlgebraElement {
    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn lift(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

/// Coefficient vector of `q mod p`, padded to length `deg p`.
pub fn reduce(q: &Poly, p: &Poly) -> Result<AlgebraElement, AlgebraError> {
    let (pm, _) = p.monic()?;
    let n = pm.degree();
    let rem = q.mod_reduce(&pm)?;
    let mut coeffs = vec![cx(0.0, 0.0); n];
    for i in 0..n {
        coeffs[i] = rem.coeff(i);
    }
    Ok(AlgebraElement { coeffs, modulus: pm })
}

pub fn unit(p: &Poly) -> Result<AlgebraElement, AlgebraError> {
    reduce(&Poly::constant(cx(1.0, 0.0)), p)
}

pub fn z_class(p: &Poly) -> Result<AlgebraElement, AlgebraError> {
    reduce(&Poly::new(vec![cx(0.0, 0.0), cx(1.0, 0.0)]), p)
}

pub fn algebra_mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if a.modulus != b.modulus {
        return Err(AlgebraError::ModulusMismatch);
    }
    reduce(&a.lift().multiply(&b.lift()), &a.modulus)
}

/// The class of (z-w)(wz-1) = wz^2 - (1+w^2)z + w modulo p.
pub fn h_element(w: Cx, p: &Poly) -> Result<AlgebraElement, AlgebraError> {
    let one = cx(1.0, 0.0);
    let h = Poly::new(vec![w, -(one + w * w), w]);
    reduce(&h, p)
}

/// Matrix of multiplication by `a`: column j holds the coordinates of
/// `a * z^j`.
pub fn mul_matrix(a: &AlgebraElement) -> Result<DMatrix<Cx>, AlgebraError> {
    let n = a.coeffs.len();
    let mut m = DMatrix::zeros(n, n);
    let mut col = a.clone();
    let z = z_class(&a.modulus)?;
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = col.coeffs[i];
        }
        if j + 1 < n {
            col = algebra_mul(&col, &z)?;
        }
    }
    Ok(m)
}

/// Companion matrix of a monic polynomial: the matrix of multiplication by z.
pub fn companion(p: &Poly) -> Result<DMatrix<Cx>, AlgebraError> {
    let (pm, _) = p.monic()?;
    let n = pm.degree();
    let mut c = DMatrix::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = cx(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -pm.coeff(i);
    }
    Ok(c)
}

/// Square matrix whose entries are polynomials in w.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>, // row-major
}

impl PolyMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn max_entry_degree(&self) -> usize {
        self.entries
            .iter()
            .map(|e| if e.is_zero() { 0 } else { e.degree() })
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, w: Cx) -> DMatrix<Cx> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).eval(w))
    }
}

/// Matrix of multiplication by H(w), entry-wise as polynomials in w, built
/// from the companion matrix C via M(w) = w(C^2 + I) - (1+w^2)C.
pub fn m_of_w_symbolic(p: &Poly) -> Result<PolyMatrix, AlgebraError> {
    let (pm, _) = p.monic()?;
    let n = pm.degree();
    let c = companion(&pm)?;
    let c2 = &c * &c;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let cij = c[(i, j)];
            let mut lin = c2[(i, j)];
            if i == j {
                lin += cx(1.0, 0.0);
            }
            // -C_ij w^2 + (C^2+I)_ij w - C_ij
            entries.push(Poly::new(vec![-cij, lin, -cij]));
        }
    }
    Ok(PolyMatrix { n, entries })
}

/// Determinant of a polynomial matrix by evaluation at scaled roots of unity
/// and inverse-DFT interpolation. Near-zero leading coefficients are trimmed.
pub fn det_poly(m: &PolyMatrix) -> Poly {
    let deg_bound = m.size() * m.max_entry_degree();
    let samples = deg_bound + 1;
    let radius = 1.3;
    let tau = 2.0 * std::f64::consts::PI;
    let values: Vec<Cx> = (0..samples)
        .map(|j| {
            let w = Cx::from_polar(radius, tau * (j as f64) / (samples as f64));
            m.eval(w).lu().determinant()
        })
        .collect();
    // c_k = R^{-k} (1/m) sum_j y_j e^{-2*pi*i*jk/m}
    let mut coeffs = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut acc = cx(0.0, 0.0);
        for (j, &y) in values.iter().enumerate() {
            let phase = -tau * ((j * k) % samples) as f64 / (samples as f64);
            acc += y * Cx::from_polar(1.0, phase);
        }
        coeffs.push(acc / (samples as f64) / radius.powi(k as i32));
    }
    Poly::new(coeffs).trim_leading(1e-10)
}

/// Finite-dimensional commutative algebra given by its multiplication table
/// e_i e_j = sum_k c[i][j][k] e_k in a fixed basis, with a designated unit
/// basis element.
#[derive(Debug, Clone)]
pub struct StructureAlgebra {
    dim: usize,
    constants: Vec<Cx>, // index (i*dim + j)*dim + k
    unit_index: usize,
}

impl StructureAlgebra {
    pub fn new(dim: usize, constants: Vec<Cx>, unit_index: usize) -> Result<Self, AlgebraError> {
        if constants.len() != dim * dim * dim {
            return Err(AlgebraError::TensorSize {
                expected: dim * dim * dim,
                got: constants.len(),
            });
        }
        let alg = StructureAlgebra { dim, constants, unit_index };
        let scale = alg.constants.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for i in 0..dim {
            for j in 0..i {
                for k in 0..dim {
                    if (alg.c(i, j, k) - alg.c(j, i, k)).norm() > 1e-12 * scale {
                        return Err(AlgebraError::NotCommutative { i, j, k });
                    }
                }
            }
        }
        // unit sweep: e_u * e_j = e_j for every j
        for j in 0..dim {
            for k in 0..dim {
                let expect = if k == j { 1.0 } else { 0.0 };
                if (alg.c(unit_index, j, k) - cx(expect, 0.0)).norm() > 1e-12 * scale {
                    return Err(AlgebraError::BadUnit);
                }
            }
        }
        Ok(alg)
    }

    /// Multiplication table of C[z]/<p> in the power basis.
    pub fn from_polynomial(p: &Poly) -> Result<Self, AlgebraError> {
        let (pm, _) = p.monic()?;
        let n = pm.degree();
        let mut constants = vec![cx(0.0, 0.0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let mut prod = vec![cx(0.0, 0.0); i + j + 1];
                prod[i + j] = cx(1.0, 0.0);
                let red = reduce(&Poly::new(prod), &pm)?;
                for k in 0..n {
                    constants[(i * n + j) * n + k] = red.coeffs()[k];
                }
            }
        }
        StructureAlgebra::new(n, constants, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_index(&self) -> usize {
        self.unit_index
    }

    /// Flattened structure tensor, index order (i*dim + j)*dim + k.
    pub fn constants(&self) -> &[Cx] {
        &self.constants
    }

    fn c(&self, i: usize, j: usize, k: usize) -> Cx {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit_vector(&self) -> Vec<Cx> {
        let mut v = vec![cx(0.0, 0.0); self.dim];
        v[self.unit_index] = cx(1.0, 0.0);
        v
    }

    pub fn mul(&self, x: &[Cx], y: &[Cx]) -> Vec<Cx> {
        let mut out = vec![cx(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            if x[i].norm() == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                let xy = x[i] * y[j];
                if xy.norm() == 0.0 {
                    continue;
                }
                for k in 0..self.dim {
                    out[k] += xy * self.c(i, j, k);
                }
            }
        }
        out
    }
}

/// Monic polynomial of least degree annihilating `x`, found as the first
/// linear dependence in the Krylov sequence 1, x, x^2, ... Rank decisions use
/// a relative singular-value threshold of 1e-10.
pub fn minimal_polynomial(alg: &StructureAlgebra, x: &[Cx]) -> Result<Poly, AlgebraError> {
    if x.len() != alg.dim() {
        return Err(AlgebraError::ElementLength);
    }
    let m = alg.dim();
    let mut powers: Vec<Vec<Cx>> = vec![alg.unit_vector()];
    for _ in 0..m {
        let last = powers.last().unwrap().clone();
        powers.push(alg.mul(x, &last));
    }
    for d in 1..=m {
        let kry = DMatrix::from_fn(m, d + 1, |i, j| powers[j][i]);
        let svd = kry.clone().svd(true, true);
        let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
        let smin = svd.singular_values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let dependent = svd.singular_values.len() < d + 1 || smin <= 1e-10 * smax.max(1e-300);
        if dependent {
            // x^d = sum_{j<d} c_j x^j, solved in least squares.
            let a = DMatrix::from_fn(m, d, |i, j| powers[j][i]);
            let b = DMatrix::from_fn(m, 1, |i, _| powers[d][i]);
            let sol = a
                .svd(true, true)
                .solve(&b, 1e-12)
                .expect("least-squares solve for Krylov dependence");
            let mut coeffs = vec![cx(0.0, 0.0); d + 1];
            for j in 0..d {
                coeffs[j] = -sol[(j, 0)];
            }
            coeffs[d] = cx(1.0, 0.0);
            return Ok(Poly::new(coeffs));
        }
    }
    unreachable!("Krylov sequence must become dependent by dimension count");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_z2_plus_1() -> Poly {
        Poly::from_real(&[1.0, 0.0, 1.0])
    }

    fn assert_cx_near(a: Cx, b: Cx, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn reduce_examples() {
        let p = p_z2_plus_1();
        let e = reduce(&Poly::from_real(&[0.0, 0.0, 1.0]), &p).unwrap();
        assert_eq!(e.coeffs(), &[cx(-1.0, 0.0), cx(0.0, 0.0)]);
        let e = reduce(&Poly::from_real(&[0.0, 1.0]), &p).unwrap();
        assert_eq!(e.coeffs(), &[cx(0.0, 0.0), cx(1.0, 0.0)]);
        // z^3 + z is identically 0 in C[z]/(z^2+1)
        let e = reduce(&Poly::from_real(&[0.0, 1.0, 0.0, 1.0]), &p).unwrap();
        assert!(e.coeffs().iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn algebra_mul_examples() {
        let p = p_z2_plus_1();
        let z = z_class(&p).unwrap();
        let zz = algebra_mul(&z, &z).unwrap();
        assert_eq!(zz.coeffs(), &[cx(-1.0, 0.0), cx(0.0, 0.0)]);

        let a = reduce(&Poly::from_real(&[0.3, -0.8]), &p).unwrap();
        let ua = algebra_mul(&unit(&p).unwrap(), &a).unwrap();
        assert_eq!(ua, a);

        // (-w, 1)*(-1, w) at w = 2 has coordinates (0, -5) = -(1+w^2) z
        let w = cx(2.0, 0.0);
        let left = reduce(&Poly::new(vec![-w, cx(1.0, 0.0)]), &p).unwrap();
        let right = reduce(&Poly::new(vec![cx(-1.0, 0.0), w]), &p).unwrap();
        let prod = algebra_mul(&left, &right).unwrap();
        assert_cx_near(prod.coeffs()[0], cx(0.0, 0.0), 1e-14);
        assert_cx_near(prod.coeffs()[1], cx(-5.0, 0.0), 1e-14);

        let q = Poly::from_real(&[-2.0, 0.0, 1.0]);
        let other = z_class(&q).unwrap();
        assert!(matches!(
            algebra_mul(&z, &other),
            Err(AlgebraError::ModulusMismatch)
        ));
    }

    #[test]
    fn h_element_examples() {
        let p = p_z2_plus_1();
        // coordinates (0, -(1+w^2)); at w = 0 that is (0, -1)
        let h = h_element(cx(0.0, 0.0), &p).unwrap();
        assert_eq!(h.coeffs(), &[cx(0.0, 0.0), cx(-1.0, 0.0)]);
        let w = cx(0.4, 0.7);
        let h = h_element(w, &p).unwrap();
        assert_cx_near(h.coeffs()[0], cx(0.0, 0.0), 1e-14);
        assert_cx_near(h.coeffs()[1], -(cx(1.0, 0.0) + w * w), 1e-14);

        // scalar case p = z - c
        let c = cx(1.5, 0.5);
        let pc = Poly::new(vec![-c, cx(1.0, 0.0)]);
        let h = h_element(w, &pc).unwrap();
        assert_cx_near(h.coeffs()[0], (c - w) * (w * c - cx(1.0, 0.0)), 1e-13);

        // p = z^2 - 2 at w = 0: class of -z
        let h = h_element(cx(0.0, 0.0), &Poly::from_real(&[-2.0, 0.0, 1.0])).unwrap();
        assert_eq!(h.coeffs(), &[cx(0.0, 0.0), cx(-1.0, 0.0)]);
    }

    #[test]
    fn mul_matrix_examples() {
        let p = p_z2_plus_1();
        let m = mul_matrix(&z_class(&p).unwrap()).unwrap();
        assert_eq!(m[(0, 0)], cx(0.0, 0.0));
        assert_eq!(m[(0, 1)], cx(-1.0, 0.0));
        assert_eq!(m[(1, 0)], cx(1.0, 0.0));
        assert_eq!(m[(1, 1)], cx(0.0, 0.0));

        let id = mul_matrix(&unit(&p).unwrap()).unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));

        // class of -(1+w^2) z at w = 1: companion scaled by -2
        let h = h_element(cx(1.0, 0.0), &p).unwrap();
        let m = mul_matrix(&h).unwrap();
        assert_cx_near(m[(0, 1)], cx(2.0, 0.0), 1e-14);
        assert_cx_near(m[(1, 0)], cx(-2.0, 0.0), 1e-14);
    }

    #[test]
    fn m_of_w_examples() {
        // p = z^2+1: C^2+I = 0 so M(w) = [[0, 1+w^2], [-(1+w^2), 0]]
        let m = m_of_w_symbolic(&p_z2_plus_1()).unwrap();
        assert!(m.entry(0, 0).is_zero());
        assert_eq!(m.entry(0, 1), &Poly::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(m.entry(1, 0), &Poly::from_real(&[-1.0, 0.0, -1.0]));
        assert!(m.entry(1, 1).is_zero());

        // scalar case: [(c-w)(cw-1)] = [-cw^2 + (1+c^2)w - c]
        let c = cx(2.0, 0.0);
        let pc = Poly::new(vec![-c, cx(1.0, 0.0)]);
        let m = m_of_w_symbolic(&pc).unwrap();
        assert_eq!(
            m.entry(0, 0),
            &Poly::new(vec![-c, cx(1.0, 0.0) + c * c, -c])
        );

        // numeric M(w0) equals mul_matrix(H(w0)) for a random p
        let p = Poly::new(vec![cx(0.3, -0.2), cx(-1.1, 0.4), cx(0.0, 0.9), cx(1.0, 0.0)]);
        let w0 = cx(-0.7, 0.25);
        let sym = m_of_w_symbolic(&p).unwrap().eval(w0);
        let num = mul_matrix(&h_element(w0, &p).unwrap()).unwrap();
        assert!((sym - num).norm() < 1e-12);
    }

    #[test]
    fn det_poly_examples() {
        let f = det_poly(&m_of_w_symbolic(&p_z2_plus_1()).unwrap());
        let expect = [1.0, 0.0, 2.0, 0.0, 1.0];
        assert_eq!(f.degree(), 4);
        for (i, &e) in expect.iter().enumerate() {
            assert_cx_near(f.coeff(i), cx(e, 0.0), 1e-12);
        }

        let c = cx(2.0, 0.0);
        let pc = Poly::new(vec![-c, cx(1.0, 0.0)]);
        let f = det_poly(&m_of_w_symbolic(&pc).unwrap());
        // (c-w)(cw-1) = -cw^2 + (1+c^2)w - c
        assert_cx_near(f.coeff(0), -c, 1e-12);
        assert_cx_near(f.coeff(1), cx(5.0, 0.0), 1e-12);
        assert_cx_near(f.coeff(2), -c, 1e-12);

        // p = z^2-2: f = -2w^4 + 5w^2 - 2
        let f = det_poly(&m_of_w_symbolic(&Poly::from_real(&[-2.0, 0.0, 1.0])).unwrap());
        let expect = [-2.0, 0.0, 5.0, 0.0, -2.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_cx_near(f.coeff(i), cx(e, 0.0), 1e-12);
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        let alg = StructureAlgebra::from_polynomial(&p_z2_plus_1()).unwrap();
        let x = vec![cx(0.0, 0.0), cx(1.0, 0.0)];
        let q = minimal_polynomial(&alg, &x).unwrap();
        assert_eq!(q.degree(), 2);
        assert_cx_near(q.coeff(0), cx(1.0, 0.0), 1e-12);
        assert_cx_near(q.coeff(1), cx(0.0, 0.0), 1e-12);

        let u = alg.unit_vector();
        let q = minimal_polynomial(&alg, &u).unwrap();
        assert_eq!(q.degree(), 1);
        assert_cx_near(q.coeff(0), cx(-1.0, 0.0), 1e-12);

        // C (+) C diagonal product. In coordinates (a, b) the unit is (1, 1),
        // not a basis element, so the table is built in the basis
        // {unit, d = (1, -1)}: unit*unit = unit; unit*d = d; d*d = unit.
        let mut cs = vec![cx(0.0, 0.0); 8];
        let idx = |i: usize, j: usize, k: usize| (i * 2 + j) * 2 + k;
        cs[idx(0, 0, 0)] = cx(1.0, 0.0);
        cs[idx(0, 1, 1)] = cx(1.0, 0.0);
        cs[idx(1, 0, 1)] = cx(1.0, 0.0);
        cs[idx(1, 1, 0)] = cx(1.0, 0.0);
        let alg = StructureAlgebra::new(2, cs, 0).unwrap();
        // (2, 2) in the diagonal basis is 2*unit + 0*d.
        let q = minimal_polynomial(&alg, &[cx(2.0, 0.0), cx(0.0, 0.0)]).unwrap();
        assert_eq!(q.degree(), 1);
        assert_cx_near(q.coeff(0), cx(-2.0, 0.0), 1e-12);
        // (3, 5) diagonal = 4*unit + (-1)*d: minimal polynomial (z-3)(z-5)
        let q = minimal_polynomial(&alg, &[cx(4.0, 0.0), cx(-1.0, 0.0)]).unwrap();
        assert_eq!(q.degree(), 2);
        assert_cx_near(q.coeff(0), cx(15.0, 0.0), 1e-10);
        assert_cx_near(q.coeff(1), cx(-8.0, 0.0), 1e-10);
    }

    #[test]
    fn structure_validation() {
        // non-commutative table rejected
        let idx = |i: usize, j: usize, k: usize| (i * 2 + j) * 2 + k;
        let mut cs = vec![cx(0.0, 0.0); 8];
        cs[idx(0, 0, 0)] = cx(1.0, 0.0);
        cs[idx(0, 1, 1)] = cx(1.0, 0.0);
        cs[idx(1, 0, 1)] = cx(2.0, 0.0);
        assert!(matches!(
            StructureAlgebra::new(2, cs, 0),
            Err(AlgebraError::NotCommutative { .. })
        ));
        assert!(matches!(
            StructureAlgebra::new(2, vec![cx(0.0, 0.0); 7], 0),
            Err(AlgebraError::TensorSize { .. })
        ));
    }
}
