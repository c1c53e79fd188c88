use crate::dmh::mesh::Mesh;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element-constant data of `J' + c u = g`, `J = v u - D u'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementCoefficients<T> {
    pub diffusion: T,
    pub advection: T,
    pub reaction: T,
    /// Source density; the element load is `h * source`.
    pub source: T,
}

/// Coefficients of a linear advection-diffusion-reaction BVP with Dirichlet data.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpCoefficients<T> {
    elements: Vec<ElementCoefficients<T>>,
    pub left: T,
    pub right: T,
}

impl<T: Scalar> BvpCoefficients<T> {
    pub fn new(elements: Vec<ElementCoefficients<T>>, left: T, right: T) -> Result<Self> {
        for (k, e) in elements.iter().enumerate() {
            if !(e.diffusion > T::zero()) || !e.diffusion.is_finite() {
                return Err(Error::InvalidCoefficients {
                    element: k,
                    reason: format!("diffusion must be positive, got {}", e.diffusion),
                });
            }
            if e.reaction < T::zero() || !e.reaction.is_finite() {
                return Err(Error::InvalidCoefficients {
                    element: k,
                    reason: format!("reaction must be nonnegative, got {}", e.reaction),
                });
            }
            if !e.advection.is_finite() || !e.source.is_finite() {
                return Err(Error::InvalidCoefficients {
                    element: k,
                    reason: "advection and source must be finite".into(),
                });
            }
        }
        if !left.is_finite() || !right.is_finite() {
            return Err(Error::InvalidParameter("non-finite Dirichlet data".into()));
        }
        Ok(BvpCoefficients { elements, left, right })
    }

    /// Samples the four coefficient functions at element midpoints.
    pub fn from_fns(
        mesh: &Mesh<T>,
        d: impl Fn(T) -> T,
        v: impl Fn(T) -> T,
        c: impl Fn(T) -> T,
        g: impl Fn(T) -> T,
        left: T,
        right: T,
    ) -> Result<Self> {
        let elements = mesh
            .midpoints()
            .into_iter()
            .map(|x| ElementCoefficients {
                diffusion: d(x),
                advection: v(x),
                reaction: c(x),
                source: g(x),
            })
            .collect();
        Self::new(elements, left, right)
    }

    pub fn elements(&self) -> &[ElementCoefficients<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn has_reaction(&self) -> bool {
        self.elements.iter().any(|e| e.reaction > T::zero())
    }

    pub fn has_advection(&self) -> bool {
        self.elements.iter().any(|e| e.advection != T::zero())
    }

    pub fn check_mesh(&self, mesh: &Mesh<T>) -> Result<()> {
        if self.elements.len() != mesh.n_elements() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficient elements for a mesh of {} elements",
                self.elements.len(),
                mesh.n_elements()
            )));
        }
        Ok(())
    }

    /// Largest local Peclet number over the mesh.
    pub fn max_peclet(&self, mesh: &Mesh<T>) -> T {
        self.elements
            .iter()
            .enumerate()
            .map(|(k, e)| crate::numerics::local_peclet(e.advection, mesh.h(k), e.diffusion))
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_coefficients() {
        let ok = ElementCoefficients {
            diffusion: 1.0_f64,
            advection: 0.0,
            reaction: 0.0,
            source: 0.0,
        };
        assert!(BvpCoefficients::new(vec![ok; 3], 0.0, 0.0).is_ok());
        let bad_d = ElementCoefficients { diffusion: 0.0, ..ok };
        assert!(BvpCoefficients::new(vec![ok, bad_d], 0.0, 0.0).is_err());
        let bad_c = ElementCoefficients { reaction: -1.0, ..ok };
        assert!(BvpCoefficients::new(vec![bad_c], 0.0, 0.0).is_err());
        assert!(BvpCoefficients::new(vec![ok], f64::NAN, 0.0).is_err());
    }

    #[test]
    fn midpoint_sampling() {
        let mesh = Mesh::uniform(0.0_f64, 1.0, 4).unwrap();
        let b = BvpCoefficients::from_fns(&mesh, |_| 1.0, |x| x, |_| 0.0, |_| 0.0, 0.0, 1.0).unwrap();
        assert_eq!(b.elements()[0].advection, 0.125);
        assert_eq!(b.max_peclet(&mesh), 0.875 * 0.25 / 2.0);
    }
}
