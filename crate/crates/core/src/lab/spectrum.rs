use serde::Serialize;

use crate::problems::{EigDecomp, MatCompInstance, MaxCutInstance};
use crate::Vector;

use super::LabError;

/// An SDP dual whose slack matrix `Z(y)` can be inspected.
#[derive(Debug, Clone, PartialEq)]
pub enum DualInstance {
    MaxCut(MaxCutInstance),
    MatComp(MatCompInstance),
}

impl DualInstance {
    pub fn order(&self) -> usize {
        match self {
            DualInstance::MaxCut(i) => i.order(),
            DualInstance::MatComp(i) => i.order(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DualInstance::MaxCut(i) => i.order(),
            DualInstance::MatComp(i) => i.nobs(),
        }
    }
}

/// Smallest eigenvalues of the dual slack `Z` at some `y`, ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
}

impl SpectrumReport {
    /// Number of reported eigenvalues below `threshold`, a numerical estimate
    /// of the nullity of `Z` when `y` is near a dual optimum.
    pub fn nullity(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < threshold).count()
    }
}

pub fn spectrum_report(
    inst: &DualInstance,
    y: &Vector,
    k: usize,
) -> Result<SpectrumReport, LabError> {
    if y.len() != inst.dim() {
        return Err(LabError::Config(format!(
            "iterate has length {}, dual has {} variables",
            y.len(),
            inst.dim()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(LabError::Config("iterate is not finite".into()));
    }
    if k > inst.order() {
        return Err(LabError::Config(format!(
            "k = {k} exceeds matrix order {}",
            inst.order()
        )));
    }
    let z = match inst {
        DualInstance::MaxCut(i) => i.slack(y),
        DualInstance::MatComp(i) => i.slack(y),
    };
    let eig = EigDecomp::new(&z)?;
    Ok(SpectrumReport {
        eigenvalues: eig.smallest(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{complete_graph, laplacian_from_edges};

    #[test]
    fn k2_at_optimum() {
        let lap = laplacian_from_edges(&complete_graph(2), 2).unwrap();
        let inst = DualInstance::MaxCut(MaxCutInstance::new(lap, 4.0).unwrap());
        let r = spectrum_report(&inst, &Vector::from_element(2, 0.5), 2).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-15);
        assert!((r.eigenvalues[1] - 0.5).abs() < 1e-15);
        assert_eq!(r.nullity(1e-6), 1);
        assert!(spectrum_report(&inst, &Vector::zeros(2), 3).is_err());
    }

    #[test]
    fn matcomp_at_zero() {
        let inst = MatCompInstance::new(2, 3, vec![(0, 0), (1, 2)], vec![1.0, -1.0], 2.0).unwrap();
        let r = spectrum_report(&DualInstance::MatComp(inst), &Vector::zeros(2), 5).unwrap();
        assert!(r.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-14));
    }
}
