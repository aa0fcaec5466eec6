//! Frozen encoding, decoding and correction sequences for the spin-7/2
//! code, with their reference checkpoints.
//!
//! Level indices run from 0 (`m = -7/2`) to 7 (`m = +7/2`). The
//! adjacent-alphabet encoder and decoder have 12 and 21 pulses; the
//! extended alphabet needs 6 and 9. The pi-pulse targets were found by
//! breadth-first search through the checkpoints and then fixed here.

use super::{
    Checkpoint, CheckpointBranch, ParametricKet, Pulse, PulseAlphabet, PulseSequence, RotationAngle,
};
use crate::noise::ErrorKind;

const DIM: usize = 8;

/// Level pair holding `(alpha, beta)` after decoding, per error branch.
pub const BRANCH_TARGETS: [(ErrorKind, usize, usize); 4] = [
    (ErrorKind::None, 0, 7),
    (ErrorKind::Z, 1, 6),
    (ErrorKind::X, 2, 5),
    (ErrorKind::Y, 3, 4),
];

fn s(x: f64) -> f64 {
    x.sqrt()
}

fn pi(lo: usize, hi: usize) -> Pulse {
    Pulse::pi(lo, hi)
}

fn pi_inv(lo: usize, hi: usize) -> Pulse {
    Pulse::pi(lo, hi).with_phase_flag(true)
}

fn rot(lo: usize, hi: usize, angle: RotationAngle) -> Pulse {
    Pulse::rotation(lo, hi, angle)
}

fn rot_neg(lo: usize, hi: usize, angle: RotationAngle) -> Pulse {
    Pulse::rotation(lo, hi, angle).with_phase_flag(true)
}

fn pk(entries: &[(usize, f64, f64)]) -> ParametricKet {
    ParametricKet::from_entries(DIM, entries)
}

fn codewords() -> ParametricKet {
    pk(&[
        (0, s(0.3), 0.0),
        (5, s(0.7), 0.0),
        (2, 0.0, -s(0.7)),
        (7, 0.0, s(0.3)),
    ])
}

fn target(lo: usize, hi: usize) -> ParametricKet {
    ParametricKet::pair(DIM, lo, hi)
}

fn branch(
    name: &str,
    input: ParametricKet,
    checkpoints: Vec<(usize, ParametricKet)>,
) -> CheckpointBranch {
    CheckpointBranch {
        name: name.to_string(),
        input,
        checkpoints: checkpoints
            .into_iter()
            .map(|(after, expected)| Checkpoint { after, expected })
            .collect(),
    }
}

/// Decoder inputs: the encoded state and its normalized `S_Z`, `S_X` and
/// `-i S_Y` images.
fn decoder_inputs() -> [(&'static str, ParametricKet); 4] {
    [
        ("clean", codewords()),
        (
            "Z",
            pk(&[
                (0, -s(0.7), 0.0),
                (2, 0.0, s(0.3)),
                (5, s(0.3), 0.0),
                (7, 0.0, s(0.7)),
            ]),
        ),
        (
            "X",
            pk(&[
                (1, s(0.1), -s(0.4)),
                (3, 0.0, -s(0.5)),
                (4, s(0.5), 0.0),
                (6, s(0.4), s(0.1)),
            ]),
        ),
        (
            "Y",
            pk(&[
                (1, -s(0.1), -s(0.4)),
                (3, 0.0, s(0.5)),
                (4, s(0.5), 0.0),
                (6, -s(0.4), s(0.1)),
            ]),
        ),
    ]
}

fn adjacent_encoder() -> Vec<Pulse> {
    vec![
        pi(1, 2),
        rot(0, 1, RotationAngle::theta1()),
        rot(2, 3, RotationAngle::theta2()),
        pi(1, 2),
        pi(3, 4),
        pi(4, 5),
        pi(5, 6),
        pi(6, 7),
        pi(2, 3),
        pi(3, 4),
        pi(4, 5),
        pi(1, 2),
    ]
}

fn extended_encoder() -> Vec<Pulse> {
    vec![
        pi_inv(1, 3),
        rot(3, 5, RotationAngle::theta2()),
        rot(0, 2, RotationAngle::theta1()),
        pi_inv(5, 7),
        pi_inv(2, 3),
        pi_inv(3, 5),
    ]
}

fn adjacent_decoder() -> Vec<Pulse> {
    vec![
        // seven pi pulses
        pi(2, 3),
        pi(3, 4),
        pi(4, 5),
        pi(3, 4),
        pi(2, 3),
        pi(1, 2),
        pi(5, 6),
        // two U_{-theta1}
        rot_neg(0, 1, RotationAngle::theta1()),
        rot_neg(6, 7, RotationAngle::theta1()),
        // two pi pulses and U_{-theta3}
        pi(2, 3),
        pi(4, 5),
        rot_neg(3, 4, RotationAngle::theta3()),
        // five pi pulses
        pi(2, 3),
        pi(3, 4),
        pi(4, 5),
        pi(3, 4),
        pi(2, 3),
        // two U_{theta4} and two pi pulses
        rot(2, 3, RotationAngle::theta4()),
        rot(4, 5, RotationAngle::theta4()),
        pi(4, 5),
        pi(4, 5),
    ]
}

fn extended_decoder() -> Vec<Pulse> {
    vec![
        pi_inv(2, 4),
        pi_inv(3, 5),
        pi_inv(1, 3),
        pi_inv(4, 6),
        rot_neg(0, 1, RotationAngle::theta1()),
        rot_neg(6, 7, RotationAngle::theta1()),
        rot(3, 4, RotationAngle::theta3()),
        rot(2, 3, RotationAngle::theta4()),
        rot(4, 5, RotationAngle::theta4()),
    ]
}

/// Maps `alpha |-7/2> + beta |-5/2>` onto `alpha |0_L> + beta |1_L>`.
pub fn encoding_sequence(alphabet: PulseAlphabet) -> PulseSequence {
    let input = target(0, 1);
    match alphabet {
        PulseAlphabet::Adjacent => {
            let mut seq = PulseSequence::new("encode", adjacent_encoder());
            let after_four = pk(&[
                (0, s(0.3), 0.0),
                (1, 0.0, -s(0.7)),
                (2, s(0.7), 0.0),
                (3, 0.0, s(0.3)),
            ]);
            seq.branches.push(branch(
                "encode",
                input,
                vec![(4, after_four), (12, codewords())],
            ));
            seq
        }
        PulseAlphabet::Extended => {
            let mut seq = PulseSequence::new("encode-extended", extended_encoder());
            seq.branches
                .push(branch("encode", input, vec![(6, codewords())]));
            seq
        }
    }
}

/// Maps the clean, `Z`, `X` and `Y` branches onto the level pairs in
/// [`BRANCH_TARGETS`].
pub fn decoding_sequence(alphabet: PulseAlphabet) -> PulseSequence {
    let [clean, z, x, y] = decoder_inputs();
    match alphabet {
        PulseAlphabet::Adjacent => {
            let mut seq = PulseSequence::new("decode", adjacent_decoder());
            seq.branches = vec![
                branch(
                    clean.0,
                    clean.1,
                    vec![
                        (
                            7,
                            pk(&[
                                (0, s(0.3), 0.0),
                                (1, s(0.7), 0.0),
                                (6, 0.0, -s(0.7)),
                                (7, 0.0, s(0.3)),
                            ]),
                        ),
                        (21, target(0, 7)),
                    ],
                ),
                branch(
                    z.0,
                    z.1,
                    vec![
                        (
                            7,
                            pk(&[
                                (0, -s(0.7), 0.0),
                                (1, s(0.3), 0.0),
                                (6, 0.0, s(0.3)),
                                (7, 0.0, s(0.7)),
                            ]),
                        ),
                        (21, target(1, 6)),
                    ],
                ),
                branch(
                    x.0,
                    x.1,
                    vec![
                        (
                            7,
                            pk(&[
                                (2, s(0.1), -s(0.4)),
                                (3, 0.0, s(0.5)),
                                (4, -s(0.5), 0.0),
                                (5, -s(0.4), -s(0.1)),
                            ]),
                        ),
                        (
                            12,
                            pk(&[
                                (2, 0.0, -s(0.5)),
                                (3, s(0.5), 0.0),
                                (4, 0.0, s(0.5)),
                                (5, -s(0.5), 0.0),
                            ]),
                        ),
                        (
                            17,
                            pk(&[
                                (2, s(0.5), 0.0),
                                (3, -s(0.5), 0.0),
                                (4, 0.0, -s(0.5)),
                                (5, 0.0, -s(0.5)),
                            ]),
                        ),
                        (21, target(2, 5)),
                    ],
                ),
                branch(
                    y.0,
                    y.1,
                    vec![
                        (
                            7,
                            pk(&[
                                (2, -s(0.1), -s(0.4)),
                                (3, 0.0, -s(0.5)),
                                (4, -s(0.5), 0.0),
                                (5, s(0.4), -s(0.1)),
                            ]),
                        ),
                        (
                            12,
                            pk(&[
                                (2, 0.0, s(0.5)),
                                (3, -s(0.5), 0.0),
                                (4, 0.0, s(0.5)),
                                (5, -s(0.5), 0.0),
                            ]),
                        ),
                        (
                            17,
                            pk(&[
                                (2, s(0.5), 0.0),
                                (3, s(0.5), 0.0),
                                (4, 0.0, -s(0.5)),
                                (5, 0.0, s(0.5)),
                            ]),
                        ),
                        (21, target(3, 4)),
                    ],
                ),
            ];
            seq
        }
        PulseAlphabet::Extended => {
            let mut seq = PulseSequence::new("decode-extended", extended_decoder());
            let n = seq.len();
            seq.branches = vec![
                branch(clean.0, clean.1, vec![(n, target(0, 7))]),
                branch(z.0, z.1, vec![(n, target(1, 6))]),
                branch(x.0, x.1, vec![(n, target(2, 5))]),
                branch(y.0, y.1, vec![(n, target(3, 4))]),
            ];
            seq
        }
    }
}

/// Moves the decoded pair of `branch` onto `(|-7/2>, |+7/2>)` with the
/// relative sign preserved. Empty for the clean branch.
pub fn correction_sequence(branch: ErrorKind, alphabet: PulseAlphabet) -> PulseSequence {
    let pulses = match (branch, alphabet) {
        (ErrorKind::None, _) => vec![],
        (ErrorKind::Z, _) => vec![pi_inv(0, 1), pi(6, 7)],
        (ErrorKind::X, PulseAlphabet::Adjacent) => {
            vec![pi_inv(1, 2), pi_inv(0, 1), pi(5, 6), pi(6, 7)]
        }
        (ErrorKind::X, PulseAlphabet::Extended) => vec![pi_inv(0, 2), pi(5, 7)],
        (ErrorKind::Y, PulseAlphabet::Adjacent) => vec![
            pi_inv(2, 3),
            pi_inv(1, 2),
            pi_inv(0, 1),
            pi(4, 5),
            pi(5, 6),
            pi(6, 7),
        ],
        (ErrorKind::Y, PulseAlphabet::Extended) => {
            vec![pi_inv(1, 3), pi_inv(0, 1), pi(4, 6), pi(6, 7)]
        }
    };
    PulseSequence::new(format!("correct-{branch}"), pulses)
}

/// Maps `alpha |-7/2> + beta |+7/2>` back onto the codewords: the inverse
/// of the decoder prefix that handles the clean branch.
pub fn reencoding_sequence(alphabet: PulseAlphabet) -> PulseSequence {
    let prefix = match alphabet {
        PulseAlphabet::Adjacent => 9,
        PulseAlphabet::Extended => 6,
    };
    let decoder = decoding_sequence(alphabet);
    let mut seq = PulseSequence::new("reencode", decoder.pulses[..prefix].to_vec()).inverse();
    seq.name = "reencode".into();
    seq.branches.push(branch(
        "reencode",
        target(0, 7),
        vec![(prefix, codewords())],
    ));
    seq
}
