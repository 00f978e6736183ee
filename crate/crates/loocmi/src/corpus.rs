//! The bundled desk-scale experiment corpus that drives verification and CI,
//! plus the fixed counterexample preset.

use crate::domain::{FiniteDomain, LabeledExample, PointIdx};
use crate::error::Result;
use crate::num::rat_int;
use crate::sample::Supersample;

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../corpus/", $name, ".toml")),
        }
    };
}

/// Every bundled config, in a fixed order.
pub fn bundled() -> Vec<CorpusEntry> {
    vec![
        entry!("maxpos-m3-n2"),
        entry!("maxpos-m4-n3"),
        entry!("maxpos-m5-n4"),
        entry!("maxpos-m6-n5"),
        entry!("erm-above-m4-n3"),
        entry!("erm-noisy-m3-n2"),
        entry!("erm-full3-n2"),
        entry!("maxmargin-n3"),
        entry!("maxmargin-n4"),
        entry!("alwayserr-distinct-n2"),
        entry!("alwayserr-m4-n2"),
        entry!("constant-correct-m3-n2"),
        entry!("constant-wrong-m2-n2"),
        entry!("oig-m4-n2"),
        entry!("oig-m5-n3"),
        entry!("oig-m8-n3"),
        entry!("oig-full3-n3"),
        entry!("encoder-grid16-n3-distinct"),
        entry!("copyinput-grid8-n2-distinct"),
        entry!("maxpos-m3-n2-mc"),
        entry!("maxmargin-n3-mc"),
        entry!("oig-m4-n2-mc"),
        entry!("sweep-oig-m5"),
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    bundled().into_iter().find(|e| e.name == name)
}

/// The counterexample supersample: five increasing points labeled
/// `(1,1,1,0,0)` with `n = 4`.
pub fn counterexample_preset() -> Result<(FiniteDomain, Supersample)> {
    counterexample_from_coords(&[1, 2, 3, 4, 5])
}

/// Same shape on caller-chosen integer coordinates.
pub fn counterexample_from_coords(coords: &[i64]) -> Result<(FiniteDomain, Supersample)> {
    let domain = FiniteDomain::new(coords.iter().map(|&c| rat_int(c)).collect())?;
    let labels = [1i64, 1, 1, 0, 0];
    if coords.len() != labels.len() {
        return Err(crate::error::Error::Input(
            "counterexample needs exactly 5 points".into(),
        ));
    }
    let entries = (0..coords.len())
        .map(|i| LabeledExample::new(PointIdx(i), rat_int(labels[i])))
        .collect();
    Ok((domain, Supersample::new(entries)?))
}
