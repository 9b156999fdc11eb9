//! Command targets: a permutation `w` (the interval `[e,w]`) or a skew shape
//! (its interval in Young's lattice).

use weakcde_core::lattice::{gamma_labeling, young_interval, CoverGraph, FiniteLattice, GammaLabeling, YoungInterval};
use weakcde_core::perm::Permutation;
use weakcde_core::shape::SkewShape;
use weakcde_core::weakinterval::WeakInterval;

use crate::CliError;

/// Largest `n` accepted for interval commands.
pub const MAX_INTERVAL_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Perm(Permutation),
    Shape(SkewShape),
}

/// Permutation first, then shape. A `shape:` prefix forces a shape, which is
/// needed for straight shapes such as `shape:3,2,1` that also read as permutations.
pub fn parse_target(s: &str) -> Result<Target, CliError> {
    if let Some(rest) = s.strip_prefix("shape:") {
        return parse_shape(rest).map(Target::Shape);
    }
    if let Ok(w) = s.parse::<Permutation>() {
        return Ok(Target::Perm(w));
    }
    s.parse::<SkewShape>()
        .map(Target::Shape)
        .map_err(|_| CliError::Parse(format!("`{}` is neither a permutation nor a skew shape", s)))
}

pub fn parse_perm(s: &str) -> Result<Permutation, CliError> {
    s.parse().map_err(|e| CliError::Parse(format!("`{}`: {}", s, e)))
}

pub fn parse_shape(s: &str) -> Result<SkewShape, CliError> {
    s.parse().map_err(|e| CliError::Parse(format!("`{}`: {}", s, e)))
}

/// A lattice built from a target, with display names for elements and labels.
pub enum Poset {
    Weak(WeakInterval),
    Young { interval: YoungInterval, gamma: GammaLabeling },
}

impl Poset {
    pub fn build(t: &Target) -> Result<Poset, CliError> {
        match t {
            Target::Perm(w) => {
                if w.n() > MAX_INTERVAL_N {
                    return Err(CliError::Parse(format!("n = {} is too large for interval commands", w.n())));
                }
                Ok(Poset::Weak(WeakInterval::new(w)))
            }
            Target::Shape(sigma) => {
                let interval = young_interval(sigma);
                let gamma = gamma_labeling(interval.lattice()).expect("distributive lattices are semidistributive");
                Ok(Poset::Young { interval, gamma })
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Poset::Weak(iv) => iv.w().to_compact_string(),
            Poset::Young { interval, .. } => interval.shape().to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Poset::Weak(_) => "weak_interval",
            Poset::Young { .. } => "young_interval",
        }
    }

    pub fn graph(&self) -> &CoverGraph {
        match self {
            Poset::Weak(iv) => iv.graph(),
            Poset::Young { interval, .. } => interval.graph(),
        }
    }

    pub fn gamma(&self) -> &GammaLabeling {
        match self {
            Poset::Weak(iv) => iv.gamma(),
            Poset::Young { gamma, .. } => gamma,
        }
    }

    pub fn lattice(&self) -> FiniteLattice {
        match self {
            Poset::Weak(iv) => iv.lattice(),
            Poset::Young { interval, .. } => interval.lattice().clone(),
        }
    }

    pub fn element(&self, x: usize) -> String {
        match self {
            Poset::Weak(iv) => iv.element(x).to_compact_string(),
            Poset::Young { interval, .. } => {
                let p = &interval.elements()[x];
                if p.is_empty() { "∅".to_string() } else { p.to_string() }
            }
        }
    }

    /// Length in the weak order, or number of boxes.
    pub fn rank(&self, x: usize) -> usize {
        match self {
            Poset::Weak(iv) => iv.element(x).length(),
            Poset::Young { interval, .. } => {
                (interval.elements()[x].size() - interval.elements()[interval.graph().bottom()].size()) as usize
            }
        }
    }

    /// γ-label of the cover `lower ⋖ upper`.
    pub fn edge_label(&self, lower: usize, upper: usize) -> String {
        match self {
            Poset::Weak(iv) => format!("{:?}", iv.grass_label(lower, upper).expect("a cover")),
            Poset::Young { interval, .. } => {
                let (r, c) = interval.added_box(lower, upper);
                format!("({},{})", r, c)
            }
        }
    }

    /// Name of the join-irreducible `p`, matching the edge labels.
    pub fn irreducible(&self, p: usize) -> String {
        let lower = self.graph().down(p)[0];
        self.edge_label(lower, p)
    }
}
