//! Bundled regression instances, embedded so the binary is self-contained.

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "descent_cone_cubic",
        include_str!("../fixtures/descent_cone_cubic.json"),
    ),
    ("axis_cubics", include_str!("../fixtures/axis_cubics.json")),
    (
        "nested_quadratics",
        include_str!("../fixtures/nested_quadratics.json"),
    ),
    (
        "separable_squares",
        include_str!("../fixtures/separable_squares.json"),
    ),
    (
        "exp_bounded_sector",
        include_str!("../fixtures/exp_bounded_sector.json"),
    ),
    (
        "mixed_cubic_drop",
        include_str!("../fixtures/mixed_cubic_drop.json"),
    ),
    (
        "unbounded_ridge",
        include_str!("../fixtures/unbounded_ridge.json"),
    ),
    (
        "hyperbola_shift",
        include_str!("../fixtures/hyperbola_shift.json"),
    ),
    (
        "vanishing_infimum",
        include_str!("../fixtures/vanishing_infimum.json"),
    ),
    ("box_ray", include_str!("../fixtures/box_ray.json")),
];

/// Looks a bundled fixture up by name.
pub fn by_name(name: &str) -> Option<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
