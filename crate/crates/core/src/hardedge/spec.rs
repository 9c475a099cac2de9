use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::ProductSpec;
use crate::special::ExactPolynomial;

/// Parameters of a hard-edge limit kernel: `nu_1..nu_r`, a set `J` of
/// 1-based factor indices in `2..=r` with `|J| = q < r`, and the fixed
/// offsets `mu_k = m_{j_k} - n >= nu_{j_k} + 1` on `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardEdgeSpec {
    pub nu: Vec<usize>,
    pub j: Vec<usize>,
    pub mu: Vec<usize>,
}

impl HardEdgeSpec {
    pub fn new(nu: Vec<usize>, j: Vec<usize>, mu: Vec<usize>) -> Result<Self> {
        let h = Self { nu, j, mu };
        h.validate()?;
        Ok(h)
    }

    /// The `q = 0` kernel with parameters `nu`.
    pub fn unperturbed(nu: Vec<usize>) -> Result<Self> {
        Self::new(nu, Vec::new(), Vec::new())
    }

    /// Limit parameters of a finite family at one of its members:
    /// `mu_k = m_{j_k} - n`.
    pub fn from_product(spec: &ProductSpec, j: &[usize]) -> Result<Self> {
        validate_j(spec.r(), j)?;
        let mu = j.iter().map(|&jk| spec.m[jk - 1] - spec.n).collect();
        Self::new(spec.nu.clone(), j.to_vec(), mu)
    }

    pub fn r(&self) -> usize {
        self.nu.len()
    }

    pub fn q(&self) -> usize {
        self.j.len()
    }

    pub fn validate(&self) -> Result<()> {
        validate_j(self.r(), &self.j)?;
        if self.mu.len() != self.j.len() {
            return Err(Error::InvalidHardEdge(format!("{} offsets for {} indices", self.mu.len(), self.j.len())));
        }
        for (&jk, &mk) in self.j.iter().zip(&self.mu) {
            if mk < self.nu[jk - 1] + 1 {
                return Err(Error::InvalidHardEdge(format!("mu = {mk} < nu_{jk} + 1 = {}", self.nu[jk - 1] + 1)));
            }
        }
        Ok(())
    }

    /// `nu_j` for the factors outside `J`, with `nu_0 = 0` first.
    pub fn free_nu(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain((1..=self.r()).filter(|j| !self.j.contains(j)).map(|j| self.nu[j - 1]))
            .collect()
    }

    /// `deg R = sum_k (mu_k - nu_{j_k})`.
    pub fn rt_degree(&self) -> usize {
        self.j.iter().zip(&self.mu).map(|(&jk, &mk)| mk - self.nu[jk - 1]).sum()
    }
}

fn validate_j(r: usize, j: &[usize]) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidHardEdge("need at least one factor".into()));
    }
    if j.len() >= r {
        return Err(Error::InvalidHardEdge(format!("|J| = {} must be below r = {r}", j.len())));
    }
    for (i, &jk) in j.iter().enumerate() {
        if !(2..=r).contains(&jk) {
            return Err(Error::InvalidHardEdge(format!("index {jk} outside 2..={r}")));
        }
        if j[..i].contains(&jk) {
            return Err(Error::InvalidHardEdge(format!("index {jk} repeated")));
        }
    }
    Ok(())
}

/// `c_n = n prod_{j not in J} (m_j - n)`.
pub fn scaling_constant(spec: &ProductSpec, j: &[usize]) -> Result<f64> {
    validate_j(spec.r(), j)?;
    Ok((1..=spec.r())
        .filter(|jj| !j.contains(jj))
        .map(|jj| (spec.m[jj - 1] - spec.n) as f64)
        .product::<f64>()
        * spec.n as f64)
}

/// `R(t) = prod_k Gamma(t+1+mu_k) / Gamma(t+1+nu_{j_k})
///       = prod_k prod_{l=1}^{mu_k - nu_{j_k}} (t + nu_{j_k} + l)`.
pub fn rt_polynomial(h: &HardEdgeSpec) -> Result<ExactPolynomial> {
    h.validate()?;
    Ok(ExactPolynomial::from_shifts(h.j.iter().zip(&h.mu).flat_map(|(&jk, &mk)| {
        let nu = h.nu[jk - 1] as i64;
        (1..=(mk as i64 - nu)).map(move |l| nu + l)
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn scaling_constant_cases() {
        let one = ProductSpec::new(3, vec![1], vec![9]).unwrap();
        assert_eq!(scaling_constant(&one, &[]).unwrap(), 18.0);
        let two = ProductSpec::new(2, vec![1, 0], vec![7, 8]).unwrap();
        assert_eq!(scaling_constant(&two, &[2]).unwrap(), 10.0);
        assert!(scaling_constant(&two, &[1]).is_err());
        assert!(scaling_constant(&one, &[2]).is_err());
    }

    #[test]
    fn validation() {
        assert!(HardEdgeSpec::new(vec![0, 0], vec![2], vec![1]).is_ok());
        assert!(HardEdgeSpec::new(vec![0, 2], vec![2], vec![2]).is_err());
        assert!(HardEdgeSpec::new(vec![0, 0, 0], vec![2, 3], vec![1, 1]).is_ok());
        assert!(HardEdgeSpec::new(vec![0, 0], vec![2, 2], vec![1, 1]).is_err());
        assert!(HardEdgeSpec::new(vec![0], vec![], vec![1]).is_err());
        let spec = ProductSpec::new(2, vec![1, 0], vec![7, 4]).unwrap();
        assert_eq!(HardEdgeSpec::from_product(&spec, &[2]).unwrap().mu, vec![2]);
    }

    #[test]
    fn rt_examples() {
        let h = HardEdgeSpec::new(vec![0, 0], vec![2], vec![1]).unwrap();
        let r = rt_polynomial(&h).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!((r.eval_f64(2.5) - 3.5).abs() < 1e-15);
        let h = HardEdgeSpec::new(vec![2, 1, 0], vec![3, 2], vec![3, 4]).unwrap();
        let r = rt_polynomial(&h).unwrap();
        assert_eq!(r.degree(), Some(h.rt_degree()));
        assert_eq!(h.rt_degree(), 6);
        let t = Complex64::new(0.4, 0.3);
        let want = crate::special::pochhammer(t + 1.0, 3) * crate::special::pochhammer(t + 2.0, 3);
        assert!((r.eval_complex(t) - want).norm() < 1e-12 * want.norm());
    }
}
