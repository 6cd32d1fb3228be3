use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Window;
use crate::potential::{classify_existence, CaseSigns, ExistenceClass, ModelParams, DEFAULT_ZERO_TOL};
use crate::stability::{j_with, QuadOptions};

/// Per-node tag of the existence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeClass {
    Exists,
    Boundary,
    None,
}

impl From<&ExistenceClass> for NodeClass {
    fn from(c: &ExistenceClass) -> Self {
        match c {
            ExistenceClass::Exists { .. } => NodeClass::Exists,
            ExistenceClass::BoundaryDoubleZero { .. } => NodeClass::Boundary,
            ExistenceClass::NoPositiveZero => NodeClass::None,
        }
    }
}

/// Values on a window, row-major with `gamma` as the row index:
/// node `(i_omega, i_gamma)` sits at `i_gamma * n_omega + i_omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub case: CaseSigns,
    pub window: Window,
    pub class: Vec<NodeClass>,
    pub j: Vec<Option<f64>>,
}

impl ScalarField {
    #[inline]
    pub fn index(&self, i_omega: usize, i_gamma: usize) -> usize {
        i_gamma * self.window.n_omega + i_omega
    }

    pub fn at(&self, i_omega: usize, i_gamma: usize) -> Option<f64> {
        self.j[self.index(i_omega, i_gamma)]
    }

    pub fn defined(&self) -> usize {
        self.j.iter().filter(|v| v.is_some()).count()
    }
}

fn node(case: CaseSigns, omega: f64, gamma: f64, opts: &QuadOptions) -> (NodeClass, Option<f64>) {
    let Ok(p) = ModelParams::new(case, omega, gamma) else {
        return (NodeClass::None, None);
    };
    let class = classify_existence(&p, DEFAULT_ZERO_TOL);
    let tag = NodeClass::from(&class);
    let j = match tag {
        NodeClass::Exists => j_with(&p.coeffs(), opts).ok().map(|v| v.j),
        _ => None,
    };
    (tag, j)
}

/// Classifies every node of `window` and evaluates `J` where a wave exists.
pub fn sweep(case: CaseSigns, window: &Window) -> ScalarField {
    sweep_with(case, window, &QuadOptions::default())
}

fn sweep_with(case: CaseSigns, window: &Window, opts: &QuadOptions) -> ScalarField {
    let om = window.omega_nodes();
    let ga = window.gamma_nodes();
    let n = om.len();
    let (class, j) = (0..n * ga.len())
        .into_par_iter()
        .map(|k| node(case, om[k % n], ga[k / n], opts))
        .unzip();
    ScalarField { case, window: *window, class, j }
}

/// [`sweep`] on a dedicated pool of `threads` workers; 0 uses the global pool.
pub fn sweep_with_threads(case: CaseSigns, window: &Window, threads: usize) -> ScalarField {
    if threads == 0 {
        return sweep(case, window);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| sweep(case, window)),
        Err(_) => sweep(case, window),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_result() {
        let w = Window::new((0.1, 1.0), (-2.0, 2.0), 7, 9).unwrap();
        let a = sweep_with_threads(CaseSigns::FF, &w, 1);
        let b = sweep_with_threads(CaseSigns::FF, &w, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn layout_is_gamma_major() {
        let w = Window::new((0.1, 1.0), (0.5, 5.0), 3, 4).unwrap();
        let f = sweep(CaseSigns::FD, &w);
        // Large gamma lies above the F*D curve, so the top row has no waves.
        for i in 0..3 {
            assert_eq!(f.class[f.index(i, 3)], NodeClass::None);
        }
        assert_eq!(f.class[f.index(0, 0)], NodeClass::Exists);
        assert_eq!(f.class[f.index(2, 0)], NodeClass::None);
        assert!(f.at(0, 0).unwrap() > 0.0);
    }
}
