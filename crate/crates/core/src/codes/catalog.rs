use std::str::FromStr;

use super::{ket_from_levels, signed_sqrt, CodePair, Construction};
use crate::error::{Error, Result};
use crate::spin::{Spin, SpinSystem};

pub const CATALOG_NAMES: [&str; 8] = [
    "spin72-primary",
    "spin72-alt",
    "spin92",
    "spin232",
    "spin252",
    "spin492",
    "spin472",
    "spin812",
];

struct Entry {
    twice_spin: u32,
    order: u32,
    /// `(2m, sign, numerator)` over a shared denominator.
    zero: &'static [(i32, f64, f64)],
    one: &'static [(i32, f64, f64)],
    denominator: f64,
}

const SPIN72_PRIMARY: Entry = Entry {
    twice_spin: 7,
    order: 1,
    zero: &[(-7, 1.0, 3.0), (3, 1.0, 7.0)],
    one: &[(-3, -1.0, 7.0), (7, 1.0, 3.0)],
    denominator: 10.0,
};

const SPIN72_ALT: Entry = Entry {
    twice_spin: 7,
    order: 1,
    zero: &[
        (-5, -1.0, 21.0),
        (-1, 1.0, 21.0),
        (3, 1.0, 7.0),
        (7, 1.0, 15.0),
    ],
    one: &[
        (-7, -1.0, 15.0),
        (-3, -1.0, 7.0),
        (1, -1.0, 21.0),
        (5, 1.0, 21.0),
    ],
    denominator: 64.0,
};

const SPIN92: Entry = Entry {
    twice_spin: 9,
    order: 1,
    zero: &[(-9, -1.0, 1.0), (3, 1.0, 3.0)],
    one: &[(-3, 1.0, 3.0), (9, 1.0, 1.0)],
    denominator: 4.0,
};

const SPIN232: Entry = Entry {
    twice_spin: 23,
    order: 2,
    zero: &[(-23, 1.0, 125.0), (-5, 1.0, 874.0), (15, 1.0, 483.0)],
    one: &[(23, -1.0, 125.0), (5, 1.0, 874.0), (-15, 1.0, 483.0)],
    denominator: 1482.0,
};

const SPIN252: Entry = Entry {
    twice_spin: 25,
    order: 2,
    zero: &[(-25, 1.0, 1.0), (-5, 1.0, 10.0), (15, 1.0, 5.0)],
    one: &[(25, 1.0, 1.0), (5, 1.0, 10.0), (-15, 1.0, 5.0)],
    denominator: 16.0,
};

const SPIN492: Entry = Entry {
    twice_spin: 49,
    order: 3,
    zero: &[
        (-49, 1.0, 1.0),
        (-21, 1.0, 21.0),
        (7, 1.0, 35.0),
        (35, 1.0, 7.0),
    ],
    one: &[
        (49, 1.0, 1.0),
        (21, 1.0, 21.0),
        (-7, 1.0, 35.0),
        (-35, 1.0, 7.0),
    ],
    denominator: 64.0,
};

const SPIN472: Entry = Entry {
    twice_spin: 47,
    order: 3,
    zero: &[
        (-47, 1.0, 16807.0),
        (-21, 1.0, 260145.0),
        (7, 1.0, 425867.0),
        (35, 1.0, 93483.0),
    ],
    one: &[
        (47, -1.0, 16807.0),
        (21, 1.0, 260145.0),
        (-7, 1.0, 425867.0),
        (-35, 1.0, 93483.0),
    ],
    denominator: 796302.0,
};

const SPIN812: Entry = Entry {
    twice_spin: 81,
    order: 4,
    zero: &[
        (-81, 1.0, 1.0),
        (-45, 1.0, 36.0),
        (-9, 1.0, 126.0),
        (27, 1.0, 84.0),
        (63, 1.0, 9.0),
    ],
    one: &[
        (81, 1.0, 1.0),
        (45, 1.0, 36.0),
        (9, 1.0, 126.0),
        (-27, 1.0, 84.0),
        (-63, 1.0, 9.0),
    ],
    denominator: 256.0,
};

fn build(name: &str, entry: &Entry) -> Result<CodePair> {
    let spin = Spin::from_twice(entry.twice_spin)?;
    let levels = |list: &[(i32, f64, f64)]| -> Vec<(f64, f64)> {
        list.iter()
            .map(|&(twice_m, sign, num)| {
                (
                    twice_m as f64 / 2.0,
                    signed_sqrt(sign, num, entry.denominator),
                )
            })
            .collect()
    };
    CodePair::from_levels(
        spin,
        &levels(entry.zero),
        &levels(entry.one),
        entry.order,
        Construction::Catalog {
            name: name.to_string(),
        },
    )
}

/// The spin-7/2 first-order code:
/// `|0_L> = sqrt(3/10)|-7/2> + sqrt(7/10)|+3/2>`,
/// `|1_L> = -sqrt(7/10)|-3/2> + sqrt(3/10)|+7/2>`.
pub fn spin72_code() -> CodePair {
    build("spin72-primary", &SPIN72_PRIMARY).expect("catalog entry is valid")
}

/// Looks up one of [`CATALOG_NAMES`].
pub fn catalog_code(name: &str) -> Result<CodePair> {
    let entry = match name {
        "spin72-primary" => &SPIN72_PRIMARY,
        "spin72-alt" => &SPIN72_ALT,
        "spin92" => &SPIN92,
        "spin232" => &SPIN232,
        "spin252" => &SPIN252,
        "spin492" => &SPIN492,
        "spin472" => &SPIN472,
        "spin812" => &SPIN812,
        other => {
            return Err(Error::NotFound(format!(
                "no catalogued code named '{other}' (known: {})",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    build(name, entry)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiQuditCode {
    /// First-order code on three spin-3/2 qudits.
    ThreeSpinThreeHalves,
    /// Second-order code on four spin-7/2 qudits.
    FourSpinSevenHalves,
}

impl MultiQuditCode {
    pub fn name(self) -> &'static str {
        match self {
            MultiQuditCode::ThreeSpinThreeHalves => "three-spin-3/2",
            MultiQuditCode::FourSpinSevenHalves => "four-spin-7/2",
        }
    }
}

impl FromStr for MultiQuditCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "three-spin-3/2" => Ok(MultiQuditCode::ThreeSpinThreeHalves),
            "four-spin-7/2" => Ok(MultiQuditCode::FourSpinSevenHalves),
            other => Err(Error::NotFound(format!(
                "no multi-qudit code named '{other}'"
            ))),
        }
    }
}

/// Codewords built from "all qudits in level m" product states.
pub fn multi_qudit_code(which: MultiQuditCode) -> CodePair {
    // (twice spin, count, order, zero entries, one entries) with (m, amplitude)
    let (twice, count, order, zero, one): (u32, usize, u32, Vec<(f64, f64)>, Vec<(f64, f64)>) =
        match which {
            MultiQuditCode::ThreeSpinThreeHalves => (
                3,
                3,
                1,
                vec![
                    (-1.5, signed_sqrt(1.0, 1.0, 4.0)),
                    (0.5, signed_sqrt(1.0, 3.0, 4.0)),
                ],
                vec![
                    (1.5, signed_sqrt(1.0, 1.0, 4.0)),
                    (-0.5, signed_sqrt(1.0, 3.0, 4.0)),
                ],
            ),
            MultiQuditCode::FourSpinSevenHalves => (
                7,
                4,
                2,
                vec![
                    (-3.5, signed_sqrt(1.0, 2.0, 16.0)),
                    (-1.5, signed_sqrt(1.0, 7.0, 16.0)),
                    (2.5, signed_sqrt(1.0, 7.0, 16.0)),
                ],
                vec![
                    (3.5, signed_sqrt(1.0, 2.0, 16.0)),
                    (1.5, signed_sqrt(1.0, 7.0, 16.0)),
                    (-2.5, signed_sqrt(-1.0, 7.0, 16.0)),
                ],
            ),
        };
    let spin = Spin::from_twice(twice).expect("positive spin");
    let system = SpinSystem::uniform(spin, count).expect("non-empty system");
    let uniform = |entries: &[(f64, f64)]| {
        ket_from_levels(&system, entries.iter().map(|&(m, a)| (vec![m; count], a)))
            .expect("levels are valid")
    };
    let zero = uniform(&zero);
    let one = uniform(&one);
    CodePair::new(
        system,
        zero,
        one,
        order,
        Construction::MultiQudit {
            name: which.name().to_string(),
        },
    )
    .expect("catalogued multi-qudit code is valid")
}
