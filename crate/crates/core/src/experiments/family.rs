//! The weight family `g_δ = g⁺ - δ g⁻`.

use crate::domain::{BoundaryFunction, Domain};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightFamily {
    pub base: BoundaryFunction,
    pub g_plus: BoundaryFunction,
    pub g_minus: BoundaryFunction,
    pub gamma_plus: Vec<usize>,
    pub gamma_minus: Vec<usize>,
    pub gamma_zero: Vec<usize>,
    /// `∫g⁺ / ∫g⁻`.
    pub delta0: f64,
}

impl WeightFamily {
    pub fn new(domain: &Domain, g: &BoundaryFunction) -> Result<Self> {
        domain.check(g)?;
        if !g.changes_sign() {
            return Err(Error::WeightNotSignChanging);
        }
        let g_plus = g.positive_part();
        let g_minus = g.negative_part();
        let v = g.as_slice();
        let delta0 = domain.boundary_integral(&g_plus)? / domain.boundary_integral(&g_minus)?;
        Ok(Self {
            base: g.clone(),
            gamma_plus: (0..v.len()).filter(|&i| v[i] > 0.0).collect(),
            gamma_minus: (0..v.len()).filter(|&i| v[i] < 0.0).collect(),
            gamma_zero: (0..v.len()).filter(|&i| v[i] == 0.0).collect(),
            g_plus,
            g_minus,
            delta0,
        })
    }

    /// `g⁺ - δ g⁻`; requires `δ > δ₀`.
    pub fn weight(&self, delta: f64) -> Result<BoundaryFunction> {
        if !(delta > self.delta0) {
            return Err(Error::DeltaBelowThreshold { delta, delta0: self.delta0 });
        }
        Ok(BoundaryFunction::from_vector(self.g_plus.values() - self.g_minus.values() * delta))
    }
}

/// Family of `g` together with its member `g_δ`.
pub fn build_family(domain: &Domain, g: &BoundaryFunction, delta: f64) -> Result<(WeightFamily, BoundaryFunction)> {
    let family = WeightFamily::new(domain, g)?;
    let member = family.weight(delta)?;
    Ok((family, member))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn thresholds() {
        let i = Domain::interval();
        let (fam, gd) = build_family(&i, &BoundaryFunction::new(vec![1.0, -2.0]), 1.0).unwrap();
        assert_relative_eq!(fam.delta0, 0.5);
        assert_eq!(gd.as_slice(), &[1.0, -2.0]);
        assert!(matches!(fam.weight(0.5), Err(Error::DeltaBelowThreshold { .. })));

        let d = Domain::disk(64).unwrap();
        let fam = WeightFamily::new(&d, &d.sample(f64::cos)).unwrap();
        assert_relative_eq!(fam.delta0, 1.0, epsilon = 1e-12);
        let mut last = f64::NEG_INFINITY;
        for delta in [2.0, 1.5, 1.1, 1.01, 1.001] {
            let integral = d.boundary_integral(&fam.weight(delta).unwrap()).unwrap();
            assert!(integral < 0.0 && integral > last);
            last = integral;
        }
        for (a, b) in fam.g_plus.as_slice().iter().zip(fam.g_minus.as_slice()) {
            assert_eq!(a * b, 0.0);
        }
    }
}
