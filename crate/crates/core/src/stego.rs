//! The embedding pipeline.
//!
//! The first `N` carriers of a cover (pixels in row-major order for PGM
//! images, bits for raw bit vectors) hold the least significant
//! coefficients `X`. Embedding replaces them with `Y = X^N`, the state
//! reached after `N` chaotic iterations of the negation driven by a CIIS or
//! CIDS strategy. Detection is non-blind: it recomputes `Y` from the
//! original, the message and the key, and compares it with the suspect.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ci::{iterate, BitState, Negation};
use crate::error::{Error, Result};
use crate::metric::d_state;
use crate::strategies::{cids_strategy, ciis_strategy, Fraction64, PlcmParams};

const RAW_MAGIC: &[u8; 4] = b"CIB1";

/// How the strategy is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Independent strategy, from the message and key through the PLCM.
    Ciis,
    /// Dependent strategy, from the cover bits.
    Cids,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ciis => "ciis",
            Mode::Cids => "cids",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ciis" => Ok(Mode::Ciis),
            "cids" => Ok(Mode::Cids),
            other => Err(Error::Parameter(format!("unknown mode {other:?}, expected ciis or cids"))),
        }
    }
}

/// The secret embedding key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedKey {
    pub k: Fraction64,
    pub iterations: usize,
    pub plcm: PlcmParams,
    pub lsc_count: usize,
}

impl EmbedKey {
    pub fn new(k: Fraction64, iterations: usize, plcm: PlcmParams, lsc_count: usize) -> Result<Self> {
        if lsc_count == 0 {
            return Err(Error::Parameter("at least one carrier is required".into()));
        }
        Ok(Self { k, iterations, plcm, lsc_count })
    }
}

/// The hidden message, a fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Message(pub Fraction64);

/// An 8-bit binary PGM image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u8,
    pub pixels: Vec<u8>,
}

impl PgmImage {
    pub fn new(width: usize, height: usize, maxval: u8, pixels: Vec<u8>) -> Result<Self> {
        if maxval == 0 {
            return Err(Error::Media("maxval must be positive".into()));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::Media(format!("{width}x{height} image needs {} pixels, got {}", width * height, pixels.len())));
        }
        Ok(Self { width, height, maxval, pixels })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverMedia {
    RawBits(Vec<bool>),
    Pgm(PgmImage),
}

impl CoverMedia {
    /// Number of carriers, i.e. the largest usable `N`.
    pub fn capacity(&self) -> usize {
        match self {
            CoverMedia::RawBits(bits) => bits.len(),
            CoverMedia::Pgm(img) => img.pixels.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoverMedia::RawBits(_) => "raw-bits",
            CoverMedia::Pgm(_) => "pgm",
        }
    }

    fn check_capacity(&self, n_cells: usize) -> Result<()> {
        if n_cells == 0 {
            return Err(Error::Parameter("at least one carrier is required".into()));
        }
        if n_cells > self.capacity() {
            return Err(Error::Capacity { needed: n_cells, available: self.capacity() });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &CoverMedia) -> Result<()> {
        match (self, other) {
            (CoverMedia::RawBits(a), CoverMedia::RawBits(b)) if a.len() != b.len() => {
                Err(Error::Dimension { left: a.len(), right: b.len() })
            }
            (CoverMedia::Pgm(a), CoverMedia::Pgm(b)) if (a.width, a.height) != (b.width, b.height) => {
                Err(Error::Media(format!("image sizes differ: {}x{} vs {}x{}", a.width, a.height, b.width, b.height)))
            }
            (CoverMedia::RawBits(_), CoverMedia::RawBits(_)) | (CoverMedia::Pgm(_), CoverMedia::Pgm(_)) => Ok(()),
            _ => Err(Error::Media(format!("media kinds differ: {} vs {}", self.kind(), other.kind()))),
        }
    }

    /// A copy whose first `lscs.len()` carrier LSBs are replaced by `lscs`.
    pub fn with_lscs(&self, lscs: &BitState) -> Result<CoverMedia> {
        self.check_capacity(lscs.len())?;
        match self {
            CoverMedia::RawBits(bits) => {
                let mut bits = bits.clone();
                bits[..lscs.len()].copy_from_slice(lscs.bits());
                Ok(CoverMedia::RawBits(bits))
            }
            CoverMedia::Pgm(img) => {
                let mut img = img.clone();
                for (i, (px, &b)) in img.pixels.iter_mut().zip(lscs.bits()).enumerate() {
                    let marked = (*px & !1) | u8::from(b);
                    if marked > img.maxval {
                        return Err(Error::Media(format!(
                            "carrier {} would become {marked}, above maxval {}",
                            i + 1,
                            img.maxval
                        )));
                    }
                    *px = marked;
                }
                Ok(CoverMedia::Pgm(img))
            }
        }
    }
}

/// The first `n_cells` carrier LSBs.
pub fn extract_lscs(media: &CoverMedia, n_cells: usize) -> Result<BitState> {
    media.check_capacity(n_cells)?;
    let bits: Vec<bool> = match media {
        CoverMedia::RawBits(bits) => bits[..n_cells].to_vec(),
        CoverMedia::Pgm(img) => img.pixels[..n_cells].iter().map(|px| px & 1 == 1).collect(),
    };
    BitState::from_bits(bits)
}

/// `Y = X^N` for the given LSCs.
pub fn embed_lscs(lscs: &BitState, msg: Message, key: &EmbedKey, mode: Mode) -> Result<BitState> {
    let strategy = match mode {
        Mode::Ciis => ciis_strategy(msg.0, key.k, &key.plcm, lscs.len(), key.iterations)?,
        Mode::Cids => cids_strategy(lscs, key.iterations),
    };
    iterate(lscs, &strategy, &Negation, key.iterations)
}

/// Watermarks `media`: its first `key.lsc_count` carrier LSBs become `X^N`.
pub fn embed(media: &CoverMedia, msg: Message, key: &EmbedKey, mode: Mode) -> Result<CoverMedia> {
    let x = extract_lscs(media, key.lsc_count)?;
    let y = embed_lscs(&x, msg, key, mode)?;
    media.with_lscs(&y)
}

/// Outcome of [`detect`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Detection {
    pub present: bool,
    pub hamming: usize,
    pub tau: usize,
}

/// Non-blind detection: the mark is present when the suspect's LSCs are
/// within Hamming distance `tau` of the expected `Y`.
pub fn detect(
    original: &CoverMedia,
    suspect: &CoverMedia,
    msg: Message,
    key: &EmbedKey,
    mode: Mode,
    tau: usize,
) -> Result<Detection> {
    original.check_same_shape(suspect)?;
    let expected = embed_lscs(&extract_lscs(original, key.lsc_count)?, msg, key, mode)?;
    let observed = extract_lscs(suspect, key.lsc_count)?;
    let hamming = d_state(&expected, &observed)?;
    Ok(Detection { present: hamming <= tau, hamming, tau })
}

/// Serializes to binary PGM (`P5`) or the raw-bits container.
pub fn encode_media(media: &CoverMedia) -> Vec<u8> {
    match media {
        CoverMedia::Pgm(img) => {
            let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
            out.extend_from_slice(&img.pixels);
            out
        }
        CoverMedia::RawBits(bits) => {
            let mut out = Vec::with_capacity(12 + bits.len().div_ceil(8));
            out.extend_from_slice(RAW_MAGIC);
            out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
            for chunk in bits.chunks(8) {
                out.push(chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i)));
            }
            out
        }
    }
}

/// Parses either format, chosen by its magic bytes.
pub fn decode_media(bytes: &[u8]) -> Result<CoverMedia> {
    if bytes.starts_with(b"P5") {
        decode_pgm(bytes).map(CoverMedia::Pgm)
    } else if bytes.starts_with(RAW_MAGIC) {
        decode_raw_bits(bytes).map(CoverMedia::RawBits)
    } else {
        Err(Error::Parse { offset: 0, message: "unknown magic, expected P5 or CIB1".into() })
    }
}

pub fn read_media(path: impl AsRef<Path>) -> Result<CoverMedia> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    decode_media(&bytes)
}

pub fn write_media(media: &CoverMedia, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_media(media)).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_separators(&mut self) -> Result<()> {
        let start = self.pos;
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while !matches!(self.bytes.get(self.pos), None | Some(b'\n' | b'\r')) {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
        if self.pos == start {
            return Err(parse_err(self.pos, "expected whitespace"));
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_separators()?;
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| parse_err(start, format!("{what} out of range")))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<PgmImage> {
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(parse_err(maxval_at, format!("maxval {maxval} not in 1..=255")));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(parse_err(cur.pos, "expected a single whitespace byte after maxval")),
    }
    let start = cur.pos;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(0, "image dimensions overflow"))?;
    let found = bytes.len() - start;
    if found < expected {
        return Err(parse_err(bytes.len(), format!("truncated payload: {expected} pixels expected, {found} present")));
    }
    if found > expected {
        return Err(parse_err(start + expected, format!("{} trailing bytes after pixel data", found - expected)));
    }
    PgmImage::new(width, height, maxval as u8, bytes[start..].to_vec())
}

fn decode_raw_bits(bytes: &[u8]) -> Result<Vec<bool>> {
    let header: [u8; 8] = bytes
        .get(4..12)
        .ok_or_else(|| parse_err(bytes.len(), "truncated bit count"))?
        .try_into()
        .expect("8-byte slice");
    let count = u64::from_le_bytes(header);
    let payload = &bytes[12..];
    let needed = count.div_ceil(8);
    if (payload.len() as u64) < needed {
        return Err(parse_err(bytes.len(), format!("truncated payload: {count} bits need {needed} bytes, {} present", payload.len())));
    }
    if payload.len() as u64 > needed {
        return Err(parse_err(12 + needed as usize, "trailing bytes after bit payload"));
    }
    Ok((0..count as usize).map(|i| (payload[i / 8] >> (i % 8)) & 1 == 1).collect())
}
