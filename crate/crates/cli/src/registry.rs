//! Bundled example models, addressable by name or exported as files.

use psigma_core::{gallery, serialize_model, ModelBundle};

pub const NAMES: &[&str] = &[
    "r2gravity",
    "sklyanin",
    "affine_kks",
    "so3casimir",
    "broken_jacobi",
    "broken_compat",
    "broken_action",
    "broken_liealg",
];

pub fn bundle(name: &str) -> Option<ModelBundle> {
    Some(match name {
        "r2gravity" => gallery::r2_gravity(),
        "sklyanin" => gallery::sklyanin(),
        "affine_kks" => gallery::affine_kks(),
        "so3casimir" => gallery::so3_casimir(),
        "broken_jacobi" => gallery::broken_jacobi(),
        "broken_compat" => gallery::broken_compat(),
        "broken_action" => gallery::broken_action(),
        "broken_liealg" => gallery::broken_liealg(),
        _ => return None,
    })
}

pub fn export(name: &str) -> Option<String> {
    bundle(name).map(|b| serialize_model(&b))
}

/// Resolve a model argument: an existing file path wins, otherwise a
/// bundled name (with or without the `.psm` suffix).
pub fn resolve(arg: &str) -> psigma_core::Result<ModelBundle> {
    let path = std::path::Path::new(arg);
    if path.exists() {
        return psigma_core::load_model(path);
    }
    let stem = arg.strip_suffix(".psm").unwrap_or(arg);
    bundle(stem).ok_or_else(|| {
        psigma_core::Error::Io(format!("no such file or bundled model: `{arg}`"))
    })
}
