//! Example theories shipped with the crate.

use crate::syntax::{parse_theory, Theory};
use crate::translation::{parse_relative, relative_header, RelativeTheory};

pub const POS: &str = include_str!("../theories/pos.phl");
pub const PREORDER: &str = include_str!("../theories/preorder.phl");
pub const MON: &str = include_str!("../theories/mon.phl");
pub const MON_INV: &str = include_str!("../theories/mon_inv.phl");
pub const CAT: &str = include_str!("../theories/cat.phl");
pub const QUIV: &str = include_str!("../theories/quiv.phl");
pub const SET: &str = include_str!("../theories/set.phl");
pub const RSREL: &str = include_str!("../theories/rsrel.phl");
pub const SEMILATTICE: &str = include_str!("../theories/semilattice.phl");
pub const CATEGORY_OVER_QUIV: &str = include_str!("../theories/category_over_quiv.phl");
pub const PBA: &str = include_str!("../theories/pba.phl");

fn load(src: &str) -> Theory {
    parse_theory(src).expect("bundled theory parses")
}

pub fn pos() -> Theory {
    load(POS)
}

pub fn preorder() -> Theory {
    load(PREORDER)
}

pub fn mon() -> Theory {
    load(MON)
}

pub fn mon_inv() -> Theory {
    load(MON_INV)
}

pub fn cat() -> Theory {
    load(CAT)
}

pub fn quiv() -> Theory {
    load(QUIV)
}

pub fn set() -> Theory {
    load(SET)
}

pub fn rsrel() -> Theory {
    load(RSREL)
}

/// Looks a plain theory up by name.
pub fn theory(name: &str) -> Option<Theory> {
    let src = match name {
        "pos" => POS,
        "preorder" => PREORDER,
        "mon" => MON,
        "mon_inv" => MON_INV,
        "cat" => CAT,
        "quiv" => QUIV,
        "set" => SET,
        "rsrel" => RSREL,
        _ => return None,
    };
    Some(load(src))
}

fn load_relative(src: &str) -> RelativeTheory {
    let (_, base) = relative_header(src).expect("bundled relative theory has a header");
    let base = theory(&base).expect("bundled base theory exists");
    parse_relative(src, &base).expect("bundled relative theory parses")
}

/// Join-semilattices over sets.
pub fn semilattice() -> RelativeTheory {
    load_relative(SEMILATTICE)
}

/// Small categories over quivers.
pub fn category_over_quiv() -> RelativeTheory {
    load_relative(CATEGORY_OVER_QUIV)
}

/// Partial Boolean algebras over reflexive symmetric relations.
pub fn pba() -> RelativeTheory {
    load_relative(PBA)
}

/// Looks a relative theory up by name.
pub fn relative(name: &str) -> Option<RelativeTheory> {
    match name {
        "semilattice" => Some(semilattice()),
        "category" | "category_over_quiv" => Some(category_over_quiv()),
        "pba" => Some(pba()),
        _ => None,
    }
}
