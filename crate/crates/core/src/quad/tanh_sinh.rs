//! Double-exponential (tanh-sinh) node tables on [0, 1].
//!
//! The map is `x(s) = 1 / (1 + exp(-π sinh s))`, so that
//! `dx/ds = π cosh(s) x (1 - x)`. Both `x` and `1 - x` are produced directly
//! from the exponential, which keeps the distance to either endpoint exact to
//! a few ulps even when it is far below machine epsilon.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Half-width of the truncated `s` range. Beyond it `1 - x` drops below ~1e-290.
pub(crate) const S_MAX: f64 = 6.05;
const TABLE_LEVELS: usize = 12;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub x: f64,
    pub comp: f64,
    pub weight: f64,
}

fn node_at(s: f64) -> Option<Node> {
    let u = PI * s.sinh();
    let x = 1.0 / (1.0 + (-u).exp());
    let comp = 1.0 / (1.0 + u.exp());
    let weight = PI * s.cosh() * x * comp;
    let usable = x > 0.0 && comp > 0.0 && weight > 0.0 && weight.is_finite();
    usable.then_some(Node { x, comp, weight })
}

fn build_level(level: usize) -> Vec<Node> {
    if level == 0 {
        let k_max = S_MAX.floor() as i64;
        return (-k_max..=k_max).filter_map(|k| node_at(k as f64)).collect();
    }
    let h = (0.5f64).powi(level as i32);
    let j_max = ((S_MAX / h - 1.0) / 2.0).floor() as i64;
    (-j_max - 1..=j_max)
        .map(|j| (2 * j + 1) as f64 * h)
        .filter(|s| s.abs() <= S_MAX)
        .filter_map(node_at)
        .collect()
}

fn table() -> &'static [Vec<Node>] {
    static TABLE: OnceLock<Vec<Vec<Node>>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=TABLE_LEVELS).map(build_level).collect())
}

/// Nodes introduced at `level` (step `2^-level`). Level 0 holds the integer grid.
pub(crate) fn with_level<R>(level: usize, f: impl FnOnce(&[Node]) -> R) -> R {
    if level <= TABLE_LEVELS {
        f(&table()[level])
    } else {
        f(&build_level(level))
    }
}
