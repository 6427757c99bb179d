//! Built-in fans: the five smooth toric del Pezzo surfaces.

use std::collections::BTreeMap;

use crate::fan::FanData;
use crate::format::NamedFan;

struct Entry {
    name: &'static str,
    description: &'static str,
    rays: &'static [[i64; 2]],
    cones: &'static [[usize; 2]],
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "p2",
        description: "projective plane",
        rays: &[[1, 0], [0, 1], [-1, -1]],
        cones: &[[0, 1], [1, 2], [2, 0]],
    },
    Entry {
        name: "p1xp1",
        description: "product of two projective lines",
        rays: &[[1, 0], [0, 1], [-1, 0], [0, -1]],
        cones: &[[0, 1], [1, 2], [2, 3], [3, 0]],
    },
    Entry {
        name: "dp1",
        description: "projective plane blown up at one point",
        rays: &[[1, 0], [0, 1], [1, 1], [-1, -1]],
        cones: &[[0, 2], [2, 1], [1, 3], [3, 0]],
    },
    Entry {
        name: "dp2",
        description: "projective plane blown up at two points",
        rays: &[[1, 0], [0, 1], [1, 1], [-1, 0], [0, -1]],
        cones: &[[0, 2], [2, 1], [1, 3], [3, 4], [4, 0]],
    },
    Entry {
        name: "dp3",
        description: "projective plane blown up at three points",
        rays: &[[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, -1]],
        cones: &[[0, 4], [4, 1], [1, 2], [2, 5], [5, 3], [3, 0]],
    },
];

fn build(entry: &Entry) -> NamedFan {
    let fan = FanData::new(
        2,
        entry.rays.iter().map(|r| r.to_vec()).collect(),
        entry.cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("catalog fans are well formed");
    let metadata = BTreeMap::from([(
        "description".to_string(),
        serde_json::Value::String(entry.description.to_string()),
    )]);
    NamedFan { name: entry.name.to_string(), fan, metadata }
}

pub fn catalog() -> Vec<NamedFan> {
    ENTRIES.iter().map(build).collect()
}

pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn catalog_entry(name: &str) -> Option<NamedFan> {
    ENTRIES.iter().find(|e| e.name == name).map(build)
}
