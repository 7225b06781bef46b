//! Built-in example catalog. Each entry is a complete model file; `export`
//! writes it verbatim, and `run` parses the same bytes through the normal
//! checking path, so export-then-check and direct runs coincide exactly.

pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
    /// expected outcome, shown by `catalog list`
    pub blurb: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "torus6",
        source: include_str!("../catalog/torus6.toml"),
        blurb: "flat Kähler template; every flag passes for any alpha (exit 0)",
    },
    CatalogEntry {
        name: "iwasawa",
        source: include_str!("../catalog/iwasawa.toml"),
        blurb: "balanced non-Kähler nilmanifold structure; dilatino residual 0 (exit 0)",
    },
    CatalogEntry {
        name: "sl2c",
        source: include_str!("../catalog/sl2c.toml"),
        blurb: "invariant solution at t = 2: Bismut connection, fitted alpha = 1, full system passes (exit 0)",
    },
    CatalogEntry {
        name: "hopf4",
        source: include_str!("../catalog/hopf4.toml"),
        blurb: "Hopf-surface algebra: not balanced, Gauduchon; nonzero Lee form (exit 0)",
    },
    CatalogEntry {
        name: "standard_embedding",
        source: include_str!("../catalog/standard_embedding.toml"),
        blurb: "nabla = A on Iwasawa: Pontryagin terms cancel, Bianchi reduces to dd^c(omega) != 0 (exit 1 by design)",
    },
];

pub fn get(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}
