//! Built-in channels: identity, unitary constructors (Fourier, cyclic
//! shift, plane rotation), the depolarizing channel onto the maximally
//! mixed state, and the two high-rank extreme UCPT fixtures eps3 and eps4.
//!
//! The eps3/eps4 entries involve only 1/2, sqrt(2)/2 and sqrt(3)/2; they
//! are stored as computed doubles of those radicals rather than decimal
//! literals. All entries are real, so the conjugation ambiguity between
//! the two Kraus-form conventions is vacuous here (asserted in tests).

use crate::channel::{unitary_channel, KrausSet};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// A catalog channel with its display name and a short provenance note.
#[derive(Clone, Debug)]
pub struct NamedChannel {
    pub name: String,
    pub kraus: KrausSet,
    pub provenance: String,
}

/// Specification of a built-in unitary conjugation channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitarySpec {
    /// Discrete Fourier transform on C^dim.
    Fourier { dim: usize },
    /// Cyclic shift permutation |j> -> |j+1 mod dim>.
    CyclicShift { dim: usize },
    /// Real rotation of the plane by `angle` radians.
    Rotation { angle: f64 },
}

fn real_matrix(d: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::real(d, d, entries).expect("static catalog entries are well formed")
}

/// The four operation elements of the extreme UCPT map on C^3 with maximal
/// Choi rank 4.
pub fn epsilon3() -> NamedChannel {
    let h = 0.5;
    let r2 = 0.5 * 2f64.sqrt();
    let r3 = 0.5 * 3f64.sqrt();
    let ops = vec![
        real_matrix(
            3,
            &[
                h, 0.0, 0.0, //
                0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0,
            ],
        ),
        real_matrix(
            3,
            &[
                0.0, 0.0, 0.0, //
                h, 0.0, 0.0, //
                0.0, r2, 0.0,
            ],
        ),
        real_matrix(
            3,
            &[
                0.0, r2, 0.0, //
                0.0, 0.0, r3, //
                0.0, 0.0, 0.0,
            ],
        ),
        real_matrix(
            3,
            &[
                0.0, 0.0, h, //
                0.0, 0.0, 0.0, //
                r2, 0.0, 0.0,
            ],
        ),
    ];
    NamedChannel {
        name: "eps3".to_owned(),
        kraus: KrausSet::new(ops).expect("well-formed fixture"),
        provenance: "extreme unital trace-preserving map on C^3 of maximal Choi rank 4, \
                     standard-basis operation elements"
            .to_owned(),
    }
}

/// The five operation elements of the extreme UCPT map on C^4 with maximal
/// Choi rank 5.
pub fn epsilon4() -> NamedChannel {
    let h = 0.5;
    let r2 = 0.5 * 2f64.sqrt();
    let r3 = 0.5 * 3f64.sqrt();
    let ops = vec![
        real_matrix(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, h, 0.0, //
                h, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ),
        real_matrix(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, r2, //
                0.0, r2, 0.0, 0.0,
            ],
        ),
        real_matrix(
            4,
            &[
                0.0, 0.0, r3, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                r2, 0.0, 0.0, 0.0,
            ],
        ),
        real_matrix(
            4,
            &[
                0.0, h, 0.0, 0.0, //
                0.0, 0.0, 0.0, r2, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ),
        real_matrix(
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                h, 0.0, 0.0, 0.0, //
                0.0, h, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        ),
    ];
    NamedChannel {
        name: "eps4".to_owned(),
        kraus: KrausSet::new(ops).expect("well-formed fixture"),
        provenance: "extreme unital trace-preserving map on C^4 of maximal Choi rank 5, \
                     standard-basis operation elements"
            .to_owned(),
    }
}

/// The identity channel on C^d.
pub fn identity_channel(d: usize) -> Result<NamedChannel> {
    if d == 0 {
        return Err(Error::InvalidDimension { dim: d });
    }
    Ok(NamedChannel {
        name: format!("id:{d}"),
        kraus: KrausSet::new(vec![ComplexMatrix::identity(d)])?,
        provenance: "identity channel".to_owned(),
    })
}

/// The channel A -> tr(A) I/d with Kraus family {|i><j| / sqrt(d)}.
pub fn depolarizing(d: usize) -> Result<NamedChannel> {
    if d == 0 {
        return Err(Error::InvalidDimension { dim: d });
    }
    let scale = 1.0 / (d as f64).sqrt();
    let mut ops = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            ops.push(ComplexMatrix::from_fn(d, d, |r, c| {
                if (r, c) == (i, j) {
                    C64::new(scale, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    Ok(NamedChannel {
        name: format!("depol:{d}"),
        kraus: KrausSet::new(ops)?,
        provenance: "projection onto the maximally mixed state, A -> tr(A) I/d".to_owned(),
    })
}

/// Unitary conjugation channel built from a small spec.
pub fn named_unitary(spec: UnitarySpec) -> Result<NamedChannel> {
    let (name, provenance, u) = match spec {
        UnitarySpec::Fourier { dim } => {
            if dim == 0 {
                return Err(Error::InvalidDimension { dim });
            }
            let scale = 1.0 / (dim as f64).sqrt();
            let u = ComplexMatrix::from_fn(dim, dim, |j, k| {
                let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64;
                C64::new(angle.cos() * scale, angle.sin() * scale)
            });
            (
                format!("fourier:{dim}"),
                "conjugation by the discrete Fourier transform unitary".to_owned(),
                u,
            )
        }
        UnitarySpec::CyclicShift { dim } => {
            if dim == 0 {
                return Err(Error::InvalidDimension { dim });
            }
            let u = ComplexMatrix::from_fn(dim, dim, |i, j| {
                if i == (j + 1) % dim {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            (
                format!("shift:{dim}"),
                "conjugation by the cyclic shift permutation".to_owned(),
                u,
            )
        }
        UnitarySpec::Rotation { angle } => {
            if !angle.is_finite() {
                return Err(Error::NonFinite);
            }
            let (s, c) = angle.sin_cos();
            let u = ComplexMatrix::real(2, 2, &[c, -s, s, c])?;
            (
                format!("rot:{angle}"),
                "conjugation by a real plane rotation".to_owned(),
                u,
            )
        }
    };
    Ok(NamedChannel {
        name,
        kraus: unitary_channel(&u)?,
        provenance,
    })
}

/// Resolve a builtin name as used by the command line:
/// `eps3`, `eps4`, `id:D`, `depol:D`, `fourier:D`, `shift:D`, `rot:ANGLE`.
pub fn lookup(name: &str) -> Result<NamedChannel> {
    let unknown = || Error::UnknownBuiltin {
        name: name.to_owned(),
    };
    match name {
        "eps3" => return Ok(epsilon3()),
        "eps4" => return Ok(epsilon4()),
        _ => {}
    }
    let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
    match kind {
        "id" | "identity" => {
            let d: usize = arg.parse().map_err(|_| unknown())?;
            identity_channel(d)
        }
        "depol" => {
            let d: usize = arg.parse().map_err(|_| unknown())?;
            depolarizing(d)
        }
        "fourier" => {
            let d: usize = arg.parse().map_err(|_| unknown())?;
            named_unitary(UnitarySpec::Fourier { dim: d })
        }
        "shift" => {
            let d: usize = arg.parse().map_err(|_| unknown())?;
            named_unitary(UnitarySpec::CyclicShift { dim: d })
        }
        "rot" => {
            let angle: f64 = arg.parse().map_err(|_| unknown())?;
            named_unitary(UnitarySpec::Rotation { angle })
        }
        _ => Err(unknown()),
    }
}
