//! Published reference values the pipeline is regression-checked against.

use crate::shift_poly::{CharPoly, ShiftPoly};

/// Product of `(factor, power)` pairs written in `Y`.
pub fn y_product(factors: &[(&str, u32)]) -> ShiftPoly {
    factors.iter().fold(ShiftPoly::one(), |acc, (f, k)| {
        &acc * &f.parse::<ShiftPoly>().expect("fixture polynomial").pow(*k)
    })
}

/// Product of `(factor, power)` pairs written in `X`.
pub fn x_product(factors: &[(&str, u32)]) -> CharPoly {
    let p = factors.iter().fold(ShiftPoly::one(), |acc, (f, k)| {
        &acc * &f
            .parse::<CharPoly>()
            .expect("fixture polynomial")
            .as_poly()
            .pow(*k)
    });
    CharPoly::from_poly(&p)
}

/// One printed expansion row: id, pending flag, mode (`"R"`, `"C"` or `"0"`
/// for an alias), parent, deleted row, deleted column, coefficient.
pub type PRow = (usize, u8, &'static str, usize, usize, usize, &'static str);

pub const LADDER_P: &[PRow] = &[
    (1, 0, "R", 0, 0, 0, "0"),
    (2, 0, "R", 1, 1, 1, "2*Y"),
    (3, 0, "C", 1, 1, 3, "-Y"),
    (4, 0, "R", 2, 1, 1, "3*Y"),
    (5, 0, "R", 2, 1, 2, "Y"),
    (6, 0, "C", 2, 1, 3, "-Y"),
    (7, 0, "R", 3, 2, 1, "Y"),
    (2, 0, "0", 4, 1, 1, "3*Y"),
    (8, 0, "C", 4, 1, 3, "-Y"),
    (2, 0, "0", 5, 1, 1, "-Y"),
    (9, 0, "C", 5, 1, 3, "-Y"),
    (10, 0, "C", 6, 1, 1, "-Y"),
    (11, 0, "R", 6, 2, 1, "Y"),
    (2, 0, "0", 7, 1, 1, "3*Y"),
    (12, 0, "C", 7, 1, 2, "Y"),
    (7, 0, "0", 8, 2, 1, "Y"),
    (5, 0, "0", 9, 1, 1, "-Y"),
    (5, 0, "0", 10, 2, 1, "Y"),
    (4, 0, "0", 11, 1, 1, "3*Y"),
    (13, 0, "C", 11, 1, 2, "Y"),
    (4, 0, "0", 12, 1, 1, "-Y"),
    (2, 0, "0", 13, 1, 1, "-Y"),
];

/// Nonzero entries `(row, col, coeff)` of the 13x13 ladder identity system.
pub const LADDER_Q: &[(usize, usize, &str)] = &[
    (1, 2, "2*Y"),
    (1, 3, "-Y"),
    (2, 4, "3*Y"),
    (2, 5, "Y"),
    (2, 6, "-Y"),
    (3, 7, "Y"),
    (4, 2, "3*Y"),
    (4, 8, "-Y"),
    (5, 2, "-Y"),
    (5, 9, "-Y"),
    (6, 10, "-Y"),
    (6, 11, "Y"),
    (7, 2, "3*Y"),
    (7, 12, "Y"),
    (8, 7, "Y"),
    (9, 5, "-Y"),
    (10, 5, "Y"),
    (11, 4, "3*Y"),
    (11, 13, "Y"),
    (12, 4, "-Y"),
    (13, 2, "-Y"),
];

pub const LADDER_Q_SIZE: usize = 13;

pub const LADDER_R_SUPPORT: &[usize] = &[4, 5, 13];

/// Ladder reduced system on columns 4, 5, 13, products expanded.
pub const LADDER_R: &[[&str; 3]] = &[
    [
        "6*Y^2 - 14*Y^4 + 9*Y^6",
        "2*Y^2 - Y^4 - 3*Y^6",
        "-2*Y^4 + 3*Y^6",
    ],
    ["3*Y - 3*Y^3", "Y + Y^3", "-Y^3"],
    ["8*Y^3 - 9*Y^5", "3*Y^3 + 3*Y^5", "-3*Y^5"],
    ["9*Y^2 - 17*Y^4 + 9*Y^6", "3*Y^2 - 3*Y^6", "-3*Y^4 + 3*Y^6"],
    ["-3*Y^2 + 3*Y^4", "-Y^4", "Y^4"],
    ["3*Y^2", "-Y^2", "Y^2"],
    ["8*Y^2 - 9*Y^4", "3*Y^2 + 3*Y^4", "-3*Y^4"],
    ["8*Y^3 - 9*Y^5", "3*Y^3 + 3*Y^5", "-3*Y^5"],
    ["0", "-Y", "0"],
    ["0", "Y", "0"],
    ["3*Y", "0", "Y"],
    ["-Y", "0", "0"],
    ["-3*Y^2 + 3*Y^4", "-Y^2 - Y^4", "Y^4"],
];

/// Factors of the ladder elimination result, with an overall sign of -1.
pub const LADDER_ANNIHILATOR: &[(&str, u32)] = &[
    ("Y - 1", 1),
    ("Y + 1", 1),
    ("Y^4 + 1", 1),
    ("Y^4 - 4*Y^2 + 1", 2),
];
/// Factored annihilator: `(factor, multiplicity)` pairs.
pub type Factored = &'static [(&'static str, u32)];

pub const LADDER_MINIMAL: &[(&str, u32)] = &[("Y - 1", 1), ("Y + 1", 1), ("Y^4 - 4*Y^2 + 1", 2)];
pub const LADDER_VALIDITY: (i64, i64) = (10, 13);
pub const LADDER_STRIDE2: &[(&str, u32)] = &[("Y - 1", 1), ("Y^4 - 4*Y^2 + 1", 2)];

pub const PATH_MINIMAL: (Factored, Factored) = (&[("X - 1", 2)], &[("X - 1", 1)]);
pub const PATH_VALIDITY: (i64, i64) = (3, 2);

pub const TWO_TREE_MINIMAL: (Factored, Factored) = (
    &[("X + 1", 1), ("X^2 - 3*X + 1", 2)],
    &[("X^2 - 3*X + 1", 1)],
);
pub const TWO_TREE_VALIDITY: (i64, i64) = (7, 5);

pub const FAN_MINIMAL: &[(&str, u32)] = &[("X^2 - 3*X + 1", 1)];
pub const FAN_VALIDITY: (i64, i64) = (3, 4);
pub const WHEEL_NUMERATOR_VALIDITY: i64 = 3;
pub const WHEEL_DENOMINATOR: &[(&str, u32)] = &[("X^2 - 3*X + 1", 1), ("X - 1", 1)];
pub const WHEEL_DENOMINATOR_VALIDITY: i64 = 6;

pub const THREE_TREE_EVENTS: usize = 201;
pub const THREE_TREE_FAMILIES: usize = 80;
pub const THREE_TREE_SUPPORT: &[usize] = &[3, 6, 48];

/// The 3x3 block of the reduced 3-tree system on columns 3, 6, 48.
pub const THREE_TREE_R: &[[&str; 3]] = &[
    [
        "2*Y^8 + 6*Y^6 - 12*Y^5 - 15*Y^4 + 4*Y^3 + Y^2 + Y",
        "-2*Y^8 - Y^7 - 14*Y^6 + 54*Y^5 + 6*Y^4 - 5*Y^3 - 6*Y^2",
        "-9*Y^5 - Y^4",
    ],
    [
        "-2*Y^7 + Y^6 - 6*Y^5 + 12*Y^4 + 14*Y^3 + 2*Y^2",
        "2*Y^7 + 20*Y^5 - 48*Y^4 - 6*Y^3 - Y^2 + 6*Y",
        "8*Y^4 - Y^5",
    ],
    ["Y^3 - Y", "6*Y^2 - Y^3", "-Y^2"],
];

/// Factors of the 3-tree elimination result, with an overall sign of -1.
pub const THREE_TREE_ANNIHILATOR: &[(&str, u32)] = &[
    ("Y - 1", 2),
    ("Y^4 - 4*Y^3 - Y^2 - 4*Y + 1", 2),
    ("Y^4 + 3*Y^3 + 6*Y^2 + 3*Y + 1", 1),
    ("2*Y^7 + 20*Y^5 - 48*Y^4 - 6*Y^3 - Y^2 + 6*Y - 1", 1),
];
pub const THREE_TREE_MINIMAL: (Factored, Factored) = (
    &[
        ("X - 1", 2),
        ("X^4 - 4*X^3 - X^2 - 4*X + 1", 2),
        ("X^4 + 3*X^3 + 6*X^2 + 3*X + 1", 1),
    ],
    &[("X - 1", 1), ("X^4 - 4*X^3 - X^2 - 4*X + 1", 1)],
);
pub const THREE_TREE_VALIDITY: (i64, i64) = (18, 10);

/// First numerator determinants from size 8 on.
pub const THREE_TREE_SEQUENCE: &[u64] = &[
    127920,
    606530,
    2858661,
    13426688,
    62846424,
    293216196,
    1364289416,
    6331841700,
    29319607080,
    135483247712,
    624865625995,
];
pub const THREE_TREE_SEQUENCE_START: i64 = 8;

pub const THREE_TREE_SHIFTS: (i64, i64) = (8, 11);
pub const THREE_TREE_ROOT: f64 = 4.41948;
pub const THREE_TREE_C_NUM_1: f64 = 0.816459;
pub const THREE_TREE_C_NUM_2: f64 = 0.0630896;
pub const THREE_TREE_C_DEN: f64 = 0.199855;

/// Asymptotic over exact, numerator sizes 8..=20.
pub const THREE_TREE_NUM_RATIOS: (i64, &[&str]) = (
    8,
    &[
        "1.00067", "0.999617", "1.00007", "1.00004", "0.999965", "1.00001", "1.", "0.999997", "1.",
        "1.", "1.", "1.", "1.",
    ],
);
/// Asymptotic over exact, denominator sizes 6..=15.
pub const THREE_TREE_DEN_RATIOS: (i64, &[&str]) = (
    6,
    &[
        "1.00078", "1.0002", "1.00003", "1.00001", "1.", "1.", "1.", "1.", "1.", "1.",
    ],
);

pub const CORRUGATED_SOFT: (usize, usize, usize) = (834, 423, 26);

/// Round to `sig` significant digits and compare with a value printed to
/// that many digits, where trailing zeros may have been dropped.
pub fn matches_printed(value: f64, printed: &str, sig: usize) -> bool {
    let Ok(p) = printed.parse::<f64>() else {
        return false;
    };
    let round = |x: f64| format!("{:.*e}", sig - 1, x);
    round(value) == round(p)
}
