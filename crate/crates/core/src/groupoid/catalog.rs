//! Built-in action groupoids.

use serde::Serialize;

use super::{ActionGroupoid, Coordinate, LieGroup};
use crate::error::{Error, Result};
use crate::smoothfn::ScalarExpr;

const UNIT_RANGE: Coordinate = Coordinate::Real { lo: -1.0, hi: 1.0 };

/// One line of the catalog listing.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub description: &'static str,
}

/// Catalog entries in listing order.
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "translation",
            parameters: "dim: 1 or 2 (default 1)",
            description: "ℝ^k acting on ℝ^k by x·h = x + h",
        },
        CatalogEntry {
            name: "trivial-action",
            parameters: "none",
            description: "ℝ acting trivially on ℝ (bundle of groups over ℝ)",
        },
        CatalogEntry {
            name: "affine-point",
            parameters: "none",
            description: "Aff⁺(1) with parameters (a, b), a > 0, over a point",
        },
        CatalogEntry {
            name: "affine-line",
            parameters: "none",
            description: "Aff⁺(1) acting on ℝ by x·(a, b) = ax + b",
        },
        CatalogEntry {
            name: "so2-plane",
            parameters: "none",
            description: "SO(2) acting on ℝ² by rotation, angle mod 2π",
        },
        CatalogEntry {
            name: "trivial-group",
            parameters: "dim: base dimension (default 1)",
            description: "the trivial group acting on ℝ^l; every arrow is a unit",
        },
    ]
}

/// Looks up a catalog entry. `dim` is the optional numeric parameter.
pub fn by_name(name: &str, dim: Option<usize>) -> Result<ActionGroupoid> {
    let no_param = |g: ActionGroupoid| match dim {
        None => Ok(g),
        Some(_) => Err(Error::InvalidParameter(format!("{name} takes no dimension parameter"))),
    };
    match name {
        "translation" => translation(dim.unwrap_or(1)),
        "trivial-action" => no_param(trivial_action()),
        "affine-point" => no_param(affine_point()),
        "affine-line" => no_param(affine_line()),
        "so2-plane" => no_param(so2_plane()),
        "trivial-group" => Ok(trivial_group(dim.unwrap_or(1))),
        other => Err(Error::UnknownGroupoid(other.to_string())),
    }
}

/// `(ℝ^k, +)`.
pub fn vector_group(k: usize) -> LieGroup {
    let mult = (0..k)
        .map(|i| ScalarExpr::coord(2 * k, i) + ScalarExpr::coord(2 * k, k + i))
        .collect();
    let inv = (0..k).map(|i| -ScalarExpr::coord(k, i)).collect();
    LieGroup::new(format!("R^{k}"), vec![0.0; k], mult, inv, vec![UNIT_RANGE; k])
        .expect("vector group dimensions are consistent")
}

/// Orientation-preserving affine maps `(a, b)` with
/// `(a, b)·(a', b') = (aa', a'b + b')`.
pub fn affine_group() -> LieGroup {
    let v = ScalarExpr::coords(4);
    let (a, b, a2, b2) = (&v[0], &v[1], &v[2], &v[3]);
    let w = ScalarExpr::coords(2);
    LieGroup::new(
        "Aff+(1)",
        vec![1.0, 0.0],
        vec![a * a2, a2 * b + b2],
        vec![w[0].powi(-1), -(&w[1] * w[0].powi(-1))],
        vec![Coordinate::Positive { lo: 0.5, hi: 2.0 }, UNIT_RANGE],
    )
    .expect("affine group dimensions are consistent")
}

/// `SO(2)` parameterised by the rotation angle.
pub fn circle_group() -> LieGroup {
    let v = ScalarExpr::coords(2);
    LieGroup::new(
        "SO(2)",
        vec![0.0],
        vec![&v[0] + &v[1]],
        vec![-ScalarExpr::coord(1, 0)],
        vec![Coordinate::Angle],
    )
    .expect("circle group dimensions are consistent")
}

/// `ℝ^k` acting on `ℝ^k` by translation.
pub fn translation(k: usize) -> Result<ActionGroupoid> {
    if k == 0 {
        return Err(Error::InvalidParameter("translation needs dim ≥ 1".into()));
    }
    let action = (0..k)
        .map(|i| ScalarExpr::coord(2 * k, i) + ScalarExpr::coord(2 * k, k + i))
        .collect();
    ActionGroupoid::new(format!("translation({k})"), k, vector_group(k), action, (-1.0, 1.0))
}

/// `ℝ^k` acting trivially on `ℝ^l`. With `l = 0` this is the group `ℝ^k`
/// over a point, the setting of Riemann combs and stencils.
pub fn trivial_bundle(l: usize, k: usize) -> ActionGroupoid {
    let action = (0..l).map(|i| ScalarExpr::coord(l + k, i)).collect();
    ActionGroupoid::new(
        format!("trivial-bundle({l},{k})"),
        l,
        vector_group(k),
        action,
        (-1.0, 1.0),
    )
    .expect("trivial bundle dimensions are consistent")
}

pub fn trivial_action() -> ActionGroupoid {
    let mut g = trivial_bundle(1, 1);
    g.id = "trivial-action".into();
    g
}

pub fn affine_point() -> ActionGroupoid {
    ActionGroupoid::new("affine-point", 0, affine_group(), Vec::new(), (-1.0, 1.0))
        .expect("affine point dimensions are consistent")
}

/// `x·(a, b) = ax + b`.
pub fn affine_line() -> ActionGroupoid {
    let v = ScalarExpr::coords(3);
    let action = vec![&v[0] * &v[1] + &v[2]];
    ActionGroupoid::new("affine-line", 1, affine_group(), action, (-1.0, 1.0))
        .expect("affine line dimensions are consistent")
}

/// `(x, y)·θ = (x cos θ − y sin θ, x sin θ + y cos θ)`.
pub fn so2_plane() -> ActionGroupoid {
    let v = ScalarExpr::coords(3);
    let (x, y, t) = (&v[0], &v[1], &v[2]);
    let action = vec![x * t.cos() - y * t.sin(), x * t.sin() + y * t.cos()];
    ActionGroupoid::new("so2-plane", 2, circle_group(), action, (-1.0, 1.0))
        .expect("rotation action dimensions are consistent")
}

/// The trivial group over `ℝ^l`.
pub fn trivial_group(l: usize) -> ActionGroupoid {
    let group = LieGroup::new("{e}", Vec::new(), Vec::new(), Vec::new(), Vec::new())
        .expect("trivial group dimensions are consistent");
    ActionGroupoid::new(
        format!("trivial-group({l})"),
        l,
        group,
        ScalarExpr::coords(l),
        (-1.0, 1.0),
    )
    .expect("trivial group dimensions are consistent")
}
