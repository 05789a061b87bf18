//! Numerical tolerances shared by the geometry, solver and CLI layers.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Hyperboloid points: `|<x,x> + 1/c^2|`.
    pub on_sheet: f64,
    /// `Q^T Q = I`, `L^T J L = J`, unitarity of representation images.
    pub isometry: f64,
    /// Cross-Gram singular values at or above `1 - intersection` are shared
    /// directions.
    pub intersection: f64,
    /// Relative KKT gap accepted by the circumcenter solver.
    pub circumcenter_kkt: f64,
    /// Gradient norm at barycenter exit.
    pub barycenter_gradient: f64,
    /// Largest generator displacement for a certified fixed point.
    pub fixedness: f64,
    /// First-order optimality of projections and fixed-set membership.
    pub membership: f64,
    /// Null-space threshold when solving for fixed sets.
    pub kernel: f64,
    /// Two orbit points closer than `orbit_merge * (1 + |x|)` are the same.
    pub orbit_merge: f64,
    /// Fixed-point test `f <= fixed_energy * (1 + scale^2)`.
    pub fixed_energy: f64,
    /// Relative decrease of `f` over `stall_window` iterations below which
    /// the triangle counts as minimal.
    pub stall_relative: f64,
    pub stall_window: usize,
    /// Slack for the monitored inequalities.
    pub monitor_slack: f64,
    /// Side length below which a triangle certifies nothing.
    pub degenerate_side: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        on_sheet: 1e-10,
        isometry: 1e-10,
        intersection: 1e-8,
        circumcenter_kkt: 1e-9,
        barycenter_gradient: 1e-9,
        fixedness: 1e-8,
        membership: 1e-8,
        kernel: 1e-9,
        orbit_merge: 1e-10,
        fixed_energy: 1e-12,
        stall_relative: 1e-12,
        stall_window: 50,
        monitor_slack: 1e-9,
        degenerate_side: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
