//! Defender observation encodings.
//!
//! The defender's view of each host is a (activity, access) pair. Three
//! encodings of the same knowledge are emitted on every step:
//!
//! * `bits52` — 4 bits per host in canonical order: two activity bits then
//!   two access bits, with 00 = none, 01 = scanned/user, 11 = exploited/admin.
//! * `bits_ak` — `bits52` plus one trailing bit for the success of the
//!   defender's previous action.
//! * `floats_sr` — 2 floats per host (activity, compromise) mapped over
//!   {0.0, 0.5, 1.0}, plus one trailing success float.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::HOST_COUNT;

pub const BITS52_LEN: usize = HOST_COUNT * 4;
pub const BITS_AK_LEN: usize = BITS52_LEN + 1;
pub const FLOATS_SR_LEN: usize = HOST_COUNT * 2 + 1;

/// Red activity detected on a host during the last step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activity {
    None,
    Scanned,
    Exploited,
}

/// Access level the attacker holds on a host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Access {
    None,
    User,
    Admin,
}

/// One host's slice of the defender's knowledge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HostKnowledge {
    pub activity: Activity,
    pub access: Access,
}

impl HostKnowledge {
    pub fn clear() -> Self {
        HostKnowledge { activity: Activity::None, access: Access::None }
    }
}

/// The defender's observation in all three encodings. All are pure functions
/// of the same (per-host knowledge, previous-action success) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BlueObservation {
    pub bits52: Vec<u8>,
    pub bits_ak: Vec<u8>,
    pub floats_sr: Vec<f64>,
}

fn pair_bits(level: u8) -> (u8, u8) {
    // 0 -> 00, 1 -> 01, 2 -> 11: the bit count mirrors severity.
    match level {
        0 => (0, 0),
        1 => (0, 1),
        _ => (1, 1),
    }
}

fn activity_level(a: Activity) -> u8 {
    match a {
        Activity::None => 0,
        Activity::Scanned => 1,
        Activity::Exploited => 2,
    }
}

fn access_level(a: Access) -> u8 {
    match a {
        Access::None => 0,
        Access::User => 1,
        Access::Admin => 2,
    }
}

pub fn encode_bits52(knowledge: &[HostKnowledge]) -> Vec<u8> {
    debug_assert_eq!(knowledge.len(), HOST_COUNT);
    let mut bits = Vec::with_capacity(BITS52_LEN);
    for k in knowledge {
        let (a0, a1) = pair_bits(activity_level(k.activity));
        let (c0, c1) = pair_bits(access_level(k.access));
        bits.extend_from_slice(&[a0, a1, c0, c1]);
    }
    bits
}

pub fn encode_ak(bits52: &[u8], last_success: bool) -> Vec<u8> {
    let mut bits = bits52.to_vec();
    bits.push(u8::from(last_success));
    bits
}

pub fn encode_sr(knowledge: &[HostKnowledge], last_success: bool) -> Vec<f64> {
    debug_assert_eq!(knowledge.len(), HOST_COUNT);
    let mut floats = Vec::with_capacity(FLOATS_SR_LEN);
    for k in knowledge {
        floats.push(f64::from(activity_level(k.activity)) / 2.0);
        floats.push(f64::from(access_level(k.access)) / 2.0);
    }
    floats.push(if last_success { 1.0 } else { 0.0 });
    floats
}

/// Build the full observation triple.
pub fn observe(knowledge: &[HostKnowledge], last_success: bool) -> BlueObservation {
    let bits52 = encode_bits52(knowledge);
    let bits_ak = encode_ak(&bits52, last_success);
    let floats_sr = encode_sr(knowledge, last_success);
    BlueObservation { bits52, bits_ak, floats_sr }
}

/// Decode a 52-bit vector back into per-host knowledge. Rejects vectors of
/// the wrong length and bit pairs outside the encoding table.
pub fn decode_bits52(bits: &[u8]) -> Result<Vec<HostKnowledge>> {
    if bits.len() != BITS52_LEN {
        return Err(Error::MalformedObservation(format!(
            "expected {BITS52_LEN} bits, got {}",
            bits.len()
        )));
    }
    let decode_pair = |b0: u8, b1: u8| -> Result<u8> {
        match (b0, b1) {
            (0, 0) => Ok(0),
            (0, 1) => Ok(1),
            (1, 1) => Ok(2),
            _ => Err(Error::MalformedObservation(format!("invalid bit pair ({b0},{b1})"))),
        }
    };
    let mut out = Vec::with_capacity(HOST_COUNT);
    for h in 0..HOST_COUNT {
        let o = h * 4;
        let act = match decode_pair(bits[o], bits[o + 1])? {
            0 => Activity::None,
            1 => Activity::Scanned,
            _ => Activity::Exploited,
        };
        let acc = match decode_pair(bits[o + 2], bits[o + 3])? {
            0 => Access::None,
            1 => Access::User,
            _ => Access::Admin,
        };
        out.push(HostKnowledge { activity: act, access: acc });
    }
    Ok(out)
}

/// Hex form of a 52-bit vector: one nibble per host, most significant bit
/// first within the nibble.
pub fn bits52_hex(bits: &[u8]) -> String {
    debug_assert_eq!(bits.len(), BITS52_LEN);
    let mut s = String::with_capacity(HOST_COUNT);
    for h in 0..HOST_COUNT {
        let o = h * 4;
        let nibble = (bits[o] << 3) | (bits[o + 1] << 2) | (bits[o + 2] << 1) | bits[o + 3];
        s.push(char::from_digit(u32::from(nibble), 16).unwrap());
    }
    s
}
