use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Partition `x_0 < x_1 < ... < x_N` of a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    nodes: Vec<T>,
}

impl<T: Scalar> Mesh<T> {
    pub fn uniform(left: T, right: T, n_elements: usize) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 elements, got {n_elements}"
            )));
        }
        if !(right > left) {
            return Err(Error::InvalidMesh("right end must exceed left end".into()));
        }
        let n = T::from(n_elements).unwrap();
        let h = (right - left) / n;
        let mut nodes: Vec<T> = (0..=n_elements).map(|i| left + T::from(i).unwrap() * h).collect();
        nodes[n_elements] = right;
        Self::from_nodes(nodes)
    }

    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh("need at least 3 nodes".into()));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::InvalidMesh(format!(
                    "nodes {i} and {} are not strictly increasing",
                    i + 1
                )));
            }
        }
        Ok(Mesh { nodes })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn left(&self) -> T {
        self.nodes[0]
    }

    pub fn right(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn length(&self) -> T {
        self.right() - self.left()
    }

    /// Width of element `k`, spanning `[x_k, x_{k+1}]`.
    pub fn h(&self, k: usize) -> T {
        self.nodes[k + 1] - self.nodes[k]
    }

    pub fn midpoint(&self, k: usize) -> T {
        (self.nodes[k] + self.nodes[k + 1]) * T::half()
    }

    pub fn max_h(&self) -> T {
        (0..self.n_elements()).map(|k| self.h(k)).fold(T::zero(), T::max)
    }

    pub fn midpoints(&self) -> Vec<T> {
        (0..self.n_elements()).map(|k| self.midpoint(k)).collect()
    }

    /// Element containing `x`; points on an interior node go to the right element.
    pub fn locate(&self, x: T) -> usize {
        let n = self.n_elements();
        match self
            .nodes
            .binary_search_by(|p| p.partial_cmp(&x).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }
}
