//! The shipped fixture files, embedded at compile time.

pub const FIXTURES: &[(&str, &str)] = &[
    ("boxworld", include_str!("../fixtures/boxworld.json")),
    ("cut_corner_dual", include_str!("../fixtures/cut_corner_dual.json")),
    ("cut_corner_ebar", include_str!("../fixtures/cut_corner_ebar.json")),
    ("cut_corner_g2", include_str!("../fixtures/cut_corner_g2.json")),
    ("cut_corner_inner", include_str!("../fixtures/cut_corner_inner.json")),
    ("identity4", include_str!("../fixtures/identity4.json")),
    ("pentagon", include_str!("../fixtures/pentagon.json")),
    ("pentagon_a1", include_str!("../fixtures/pentagon_a1.json")),
    ("pentagon_a2", include_str!("../fixtures/pentagon_a2.json")),
    ("pentagon_b1", include_str!("../fixtures/pentagon_b1.json")),
    ("pentagon_b2", include_str!("../fixtures/pentagon_b2.json")),
    ("pentagon_embedded_inner", include_str!("../fixtures/pentagon_embedded_inner.json")),
    ("pentagon_embedded_outer", include_str!("../fixtures/pentagon_embedded_outer.json")),
    ("pentagon_inner_states", include_str!("../fixtures/pentagon_inner_states.json")),
    ("pentagon_outer_effects", include_str!("../fixtures/pentagon_outer_effects.json")),
    ("pentagon_quantum_a", include_str!("../fixtures/pentagon_quantum_a.json")),
    ("pentagon_quantum_b", include_str!("../fixtures/pentagon_quantum_b.json")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn fixture(name: &str) -> crate::Result<crate::io::MatrixFile> {
    let text = fixture_text(name).ok_or_else(|| crate::CopeError::Io(format!("no fixture named '{name}'")))?;
    crate::io::MatrixFile::from_json(text)
}
