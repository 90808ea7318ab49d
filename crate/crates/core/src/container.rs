//! On-disk container: one file per simulated device, each holding a header
//! copy followed by that device's column of every stripe.
//!
//! Payload bytes are packed into symbols `width` bits at a time (LSB first
//! within each byte), padded with zero bits up to a whole number of stripes;
//! the true byte length is recorded in the header so unsharding can
//! truncate exactly. Erasure locations live in a plain-text sidecar of
//! `stripe,row,col` and `device,j` lines; the decoder never reads the
//! content of an erased cell.

use crate::algebra::{Algebra, AlgebraError, AlgebraKind};
use crate::codec::{parity_positions, DecodeFailure, ErasurePattern, StripeArray, StripeCodec};
use crate::construction::{CodeError, CodeParams, CodeVariant};
use crate::verifier::{enumerate_pmds_patterns, enumerate_sd_patterns, pattern_count, Property};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const MAGIC: [u8; 8] = *b"PMDSAR1\0";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 36;

/// Default sidecar file name inside a device directory.
pub const SIDECAR_NAME: &str = "erasures.txt";

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic {0:?}")]
    BadMagic([u8; 8]),
    #[error("unsupported container version {0}")]
    BadVersion(u16),
    #[error("unknown variant tag {0}")]
    BadVariantTag(u8),
    #[error("unknown algebra kind tag {0}")]
    BadAlgebraKind(u8),
    #[error("header too short: {got} bytes, need {HEADER_LEN}")]
    TruncatedHeader { got: usize },
    #[error("device {device}: header differs from device {reference}")]
    HeaderMismatch { device: usize, reference: usize },
    #[error("device {device}: file is {got} bytes, expected {expected}")]
    SizeMismatch {
        device: usize,
        expected: u64,
        got: u64,
    },
    #[error("no device files found in the directory")]
    MissingAllDevices,
    #[error("stripe {stripe}: {failure}")]
    Decode { stripe: u32, failure: DecodeFailure },
    #[error("sidecar line {line}: {msg}")]
    Sidecar { line: usize, msg: String },
    #[error("{0}")]
    OutOfRange(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Fixed-size little-endian header carried by every device file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub variant: CodeVariant,
    pub algebra_kind: AlgebraKind,
    /// `b` for a field, `p` for a ring.
    pub algebra_param: u32,
    /// Field modulus bit pattern; zero for rings.
    pub modulus: u32,
    pub m: u16,
    pub n: u16,
    pub stripe_count: u32,
    pub payload_length: u64,
}

impl ContainerHeader {
    pub fn for_params(
        params: &CodeParams,
        stripe_count: u32,
        payload_length: u64,
    ) -> Result<Self, ContainerError> {
        let alg = params.algebra();
        let (kind, param, modulus) = match alg.kind() {
            AlgebraKind::Field => (
                AlgebraKind::Field,
                alg.width(),
                alg.field_modulus().unwrap(),
            ),
            AlgebraKind::Ring => (AlgebraKind::Ring, alg.ring_prime().unwrap(), 0),
        };
        let m = u16::try_from(params.m())
            .map_err(|_| ContainerError::OutOfRange(format!("m = {} exceeds u16", params.m())))?;
        let n = u16::try_from(params.n())
            .map_err(|_| ContainerError::OutOfRange(format!("n = {} exceeds u16", params.n())))?;
        Ok(ContainerHeader {
            variant: params.variant(),
            algebra_kind: kind,
            algebra_param: param,
            modulus,
            m,
            n,
            stripe_count,
            payload_length,
        })
    }

    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..8].copy_from_slice(&MAGIC);
        out[8..10].copy_from_slice(&VERSION.to_le_bytes());
        out[10] = match self.variant {
            CodeVariant::Sd => 0,
            CodeVariant::Pmds => 1,
        };
        out[11] = match self.algebra_kind {
            AlgebraKind::Field => 0,
            AlgebraKind::Ring => 1,
        };
        out[12..16].copy_from_slice(&self.algebra_param.to_le_bytes());
        out[16..20].copy_from_slice(&self.modulus.to_le_bytes());
        out[20..22].copy_from_slice(&self.m.to_le_bytes());
        out[22..24].copy_from_slice(&self.n.to_le_bytes());
        out[24..28].copy_from_slice(&self.stripe_count.to_le_bytes());
        out[28..36].copy_from_slice(&self.payload_length.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, ContainerError> {
        if bytes.len() < HEADER_LEN {
            return Err(ContainerError::TruncatedHeader { got: bytes.len() });
        }
        let mut magic = [0u8; 8];
        magic.copy_from_slice(&bytes[0..8]);
        if magic != MAGIC {
            return Err(ContainerError::BadMagic(magic));
        }
        let version = u16::from_le_bytes([bytes[8], bytes[9]]);
        if version != VERSION {
            return Err(ContainerError::BadVersion(version));
        }
        let variant = match bytes[10] {
            0 => CodeVariant::Sd,
            1 => CodeVariant::Pmds,
            t => return Err(ContainerError::BadVariantTag(t)),
        };
        let algebra_kind = match bytes[11] {
            0 => AlgebraKind::Field,
            1 => AlgebraKind::Ring,
            t => return Err(ContainerError::BadAlgebraKind(t)),
        };
        let le32 =
            |o: usize| u32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]);
        Ok(ContainerHeader {
            variant,
            algebra_kind,
            algebra_param: le32(12),
            modulus: le32(16),
            m: u16::from_le_bytes([bytes[20], bytes[21]]),
            n: u16::from_le_bytes([bytes[22], bytes[23]]),
            stripe_count: le32(24),
            payload_length: u64::from_le_bytes(bytes[28..36].try_into().unwrap()),
        })
    }

    /// Reconstruct validated code parameters from the header fields.
    pub fn params(&self) -> Result<CodeParams, ContainerError> {
        let algebra = match self.algebra_kind {
            AlgebraKind::Field => Algebra::field(self.algebra_param, self.modulus)?,
            AlgebraKind::Ring => Algebra::ring(self.algebra_param)?,
        };
        Ok(CodeParams::new(
            self.m as usize,
            self.n as usize,
            self.variant,
            algebra,
        )?)
    }
}

pub fn device_file_name(device: usize) -> String {
    format!("device_{device:04}.pmds")
}

fn stream_bit(data: &[u8], bit: u64) -> bool {
    let byte = (bit / 8) as usize;
    byte < data.len() && data[byte] >> (bit % 8) & 1 == 1
}

fn set_stream_bit(data: &mut [u8], bit: u64) {
    data[(bit / 8) as usize] |= 1 << (bit % 8);
}

/// Shard `input` across `n` device files in `dir`, creating the directory
/// if needed. Returns the number of stripes written.
pub fn shard(input: &[u8], params: &CodeParams, dir: &Path) -> Result<u32, ContainerError> {
    let codec = StripeCodec::new(*params);
    // Validates that the layout can host the parity cells.
    parity_positions(params)?;
    let alg = params.algebra();
    let width = alg.width() as u64;
    let k = codec.data_len() as u64;
    let stripe_bits = k * width;
    let payload_bits = input.len() as u64 * 8;
    let stripe_count = payload_bits.div_ceil(stripe_bits);
    let stripe_count = u32::try_from(stripe_count)
        .map_err(|_| ContainerError::OutOfRange("input needs more than u32::MAX stripes".into()))?;

    let header = ContainerHeader::for_params(params, stripe_count, input.len() as u64)?;
    let header_bytes = header.encode();
    let sym_len = alg.symbol_byte_len();
    let (m, n) = (params.m(), params.n());

    let mut devices: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let mut buf = Vec::with_capacity(HEADER_LEN + stripe_count as usize * m * sym_len);
            buf.extend_from_slice(&header_bytes);
            buf
        })
        .collect();

    let mut data = vec![alg.zero(); codec.data_len()];
    for s in 0..stripe_count as u64 {
        for (idx, slot) in data.iter_mut().enumerate() {
            let base = s * stripe_bits + idx as u64 * width;
            let mut limbs = [0u8; 32];
            let mut any = false;
            for b in 0..width {
                if stream_bit(input, base + b) {
                    limbs[(b / 8) as usize] |= 1 << (b % 8);
                    any = true;
                }
            }
            *slot = if any {
                alg.symbol_from_bytes(&limbs[..sym_len])?
            } else {
                alg.zero()
            };
        }
        let stripe = codec.encode(&data)?;
        for c in 0..n {
            for r in 0..m {
                devices[c].extend_from_slice(&stripe.cell(r, c).to_bytes());
            }
        }
    }

    fs::create_dir_all(dir)?;
    for (j, buf) in devices.iter().enumerate() {
        fs::write(dir.join(device_file_name(j)), buf)?;
    }
    Ok(stripe_count)
}

/// Erasure metadata: whole devices plus per-stripe cells.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErasureSidecar {
    pub devices: BTreeSet<usize>,
    pub cells: BTreeSet<(u32, usize, usize)>,
}

impl ErasureSidecar {
    pub fn parse(text: &str) -> Result<Self, ContainerError> {
        let mut sidecar = ErasureSidecar::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let bad = |msg: &str| ContainerError::Sidecar {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            match fields.as_slice() {
                ["device", j] => {
                    let j = j
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| bad("bad device index"))?;
                    sidecar.devices.insert(j);
                }
                [s, r, c] => {
                    let parse = |s: &str, what: &str| {
                        s.trim()
                            .parse::<u64>()
                            .map_err(|_| bad(&format!("bad {what}")))
                    };
                    let stripe = parse(s, "stripe index")? as u32;
                    let row = parse(r, "row")? as usize;
                    let col = parse(c, "column")? as usize;
                    sidecar.cells.insert((stripe, row, col));
                }
                _ => return Err(bad("expected `stripe,row,col` or `device,j`")),
            }
        }
        Ok(sidecar)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for j in &self.devices {
            out.push_str(&format!("device,{j}\n"));
        }
        for (s, r, c) in &self.cells {
            out.push_str(&format!("{s},{r},{c}\n"));
        }
        out
    }

    fn validate(&self, header: &ContainerHeader) -> Result<(), ContainerError> {
        for &j in &self.devices {
            if j >= header.n as usize {
                return Err(ContainerError::OutOfRange(format!(
                    "device {j} out of range for n = {}",
                    header.n
                )));
            }
        }
        for &(s, r, c) in &self.cells {
            if s >= header.stripe_count || r >= header.m as usize || c >= header.n as usize {
                return Err(ContainerError::OutOfRange(format!(
                    "cell {s},{r},{c} out of range for {} stripes of {}x{}",
                    header.stripe_count, header.m, header.n
                )));
            }
        }
        Ok(())
    }
}

struct DeviceSet {
    header: ContainerHeader,
    params: CodeParams,
    /// Payload bytes per present device, `None` for missing devices.
    payloads: Vec<Option<Vec<u8>>>,
}

fn read_devices(dir: &Path) -> Result<DeviceSet, ContainerError> {
    let mut first: Option<(usize, ContainerHeader)> = None;
    for j in 0.. {
        let path = dir.join(device_file_name(j));
        if path.exists() {
            let bytes = fs::read(&path)?;
            first = Some((j, ContainerHeader::decode(&bytes)?));
            break;
        }
        if j > u16::MAX as usize {
            return Err(ContainerError::MissingAllDevices);
        }
    }
    let (ref_device, header) = first.ok_or(ContainerError::MissingAllDevices)?;
    let params = header.params()?;
    let sym_len = params.algebra().symbol_byte_len();
    let expected_len =
        (HEADER_LEN + header.stripe_count as usize * header.m as usize * sym_len) as u64;

    let mut payloads = Vec::with_capacity(header.n as usize);
    for j in 0..header.n as usize {
        let path = dir.join(device_file_name(j));
        if !path.exists() {
            payloads.push(None);
            continue;
        }
        let bytes = fs::read(&path)?;
        let this = ContainerHeader::decode(&bytes)?;
        if this != header {
            return Err(ContainerError::HeaderMismatch {
                device: j,
                reference: ref_device,
            });
        }
        if bytes.len() as u64 != expected_len {
            return Err(ContainerError::SizeMismatch {
                device: j,
                expected: expected_len,
                got: bytes.len() as u64,
            });
        }
        payloads.push(Some(bytes[HEADER_LEN..].to_vec()));
    }
    Ok(DeviceSet {
        header,
        params,
        payloads,
    })
}

/// Rebuild the original payload from a device directory, decoding around
/// missing devices and the erasures listed in the sidecar.
pub fn unshard(dir: &Path, sidecar: Option<&Path>) -> Result<Vec<u8>, ContainerError> {
    let set = read_devices(dir)?;
    let header = set.header;
    let params = set.params;
    let codec = StripeCodec::new(params);
    let alg = params.algebra();
    let sym_len = alg.symbol_byte_len();
    let width = alg.width() as u64;
    let (m, n) = (params.m(), params.n());

    let sidecar = match sidecar {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let sc = ErasureSidecar::parse(&text)?;
            sc.validate(&header)?;
            sc
        }
        None => ErasureSidecar::default(),
    };
    let mut dead_devices = sidecar.devices.clone();
    for (j, payload) in set.payloads.iter().enumerate() {
        if payload.is_none() {
            dead_devices.insert(j);
        }
    }
    let mut cells_by_stripe: BTreeMap<u32, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for &(s, r, c) in &sidecar.cells {
        cells_by_stripe.entry(s).or_default().insert((r, c));
    }

    let parity = parity_positions(&params)?;
    let k = codec.data_len();
    let stripe_bits = k as u64 * width;
    let mut out = vec![0u8; (header.stripe_count as u64 * stripe_bits).div_ceil(8) as usize];

    for s in 0..header.stripe_count {
        let mut arr = StripeArray::zero(params);
        let mut erased = BTreeSet::new();
        for c in 0..n {
            if dead_devices.contains(&c) {
                for r in 0..m {
                    erased.insert((r, c));
                }
                continue;
            }
            let payload = set.payloads[c].as_ref().expect("present device");
            for r in 0..m {
                if cells_by_stripe
                    .get(&s)
                    .is_some_and(|cells| cells.contains(&(r, c)))
                {
                    erased.insert((r, c));
                    continue;
                }
                let off = (s as usize * m + r) * sym_len;
                arr.set_cell(r, c, alg.symbol_from_bytes(&payload[off..off + sym_len])?);
            }
        }
        let pattern = ErasurePattern::new(erased, m, n)?;
        arr.erase(&pattern);
        let decoded = codec
            .decode(&arr)
            .map_err(|failure| ContainerError::Decode { stripe: s, failure })?;

        let mut idx = 0u64;
        for r in 0..m {
            for c in 0..n {
                if parity.contains(r, c) {
                    continue;
                }
                let bytes = decoded.cell(r, c).to_bytes();
                let base = s as u64 * stripe_bits + idx * width;
                for b in 0..width {
                    if bytes[(b / 8) as usize] >> (b % 8) & 1 == 1 {
                        set_stream_bit(&mut out, base + b);
                    }
                }
                idx += 1;
            }
        }
    }

    out.truncate(header.payload_length as usize);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorruptTarget {
    Device(usize),
    Cell { stripe: u32, row: usize, col: usize },
}

#[derive(Debug, Clone)]
pub struct RandomCorrupt {
    /// How many distinct stripes receive a random pattern.
    pub stripes: usize,
    pub profile: Property,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct CorruptSpec {
    pub targets: Vec<CorruptTarget>,
    pub random: Option<RandomCorrupt>,
    /// Also zero the referenced bytes in the device files. Decoding ignores
    /// erased content either way.
    pub zero_fill: bool,
}

/// Write (or overwrite) the erasure sidecar for a device directory.
/// Identical specs produce identical sidecars. Returns the sidecar path.
pub fn corrupt(dir: &Path, spec: &CorruptSpec) -> Result<PathBuf, ContainerError> {
    let set = read_devices(dir)?;
    let header = set.header;
    let params = set.params;
    let (m, n) = (params.m(), params.n());

    let mut sidecar = ErasureSidecar::default();
    for target in &spec.targets {
        match *target {
            CorruptTarget::Device(j) => {
                sidecar.devices.insert(j);
            }
            CorruptTarget::Cell { stripe, row, col } => {
                sidecar.cells.insert((stripe, row, col));
            }
        }
    }

    if let Some(random) = &spec.random {
        if random.stripes > header.stripe_count as usize {
            return Err(ContainerError::OutOfRange(format!(
                "cannot pick {} distinct stripes out of {}",
                random.stripes, header.stripe_count
            )));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(random.seed);
        let mut chosen =
            rand::seq::index::sample(&mut rng, header.stripe_count as usize, random.stripes)
                .into_vec();
        chosen.sort_unstable();
        let total = pattern_count(random.profile, m, n);
        let total = u64::try_from(total)
            .map_err(|_| ContainerError::OutOfRange("pattern family too large".into()))?;
        if total == 0 {
            return Err(ContainerError::OutOfRange(
                "the pattern family is empty at this stripe shape".into(),
            ));
        }
        for stripe in chosen {
            let pick = rand::Rng::random_range(&mut rng, 0..total);
            let pattern = match random.profile {
                Property::Sd => enumerate_sd_patterns(m, n).nth(pick as usize),
                Property::Pmds => enumerate_pmds_patterns(m, n).nth(pick as usize),
            }
            .expect("index drawn below the family count");
            for (r, c) in pattern.cells() {
                sidecar.cells.insert((stripe as u32, r, c));
            }
        }
    }

    sidecar.validate(&header)?;

    if spec.zero_fill {
        let sym_len = params.algebra().symbol_byte_len();
        let zeros = vec![0u8; sym_len];
        for &(s, r, c) in &sidecar.cells {
            let path = dir.join(device_file_name(c));
            if !path.exists() {
                continue;
            }
            let mut f = fs::OpenOptions::new().write(true).open(&path)?;
            let off = HEADER_LEN + (s as usize * m + r) * sym_len;
            f.seek(SeekFrom::Start(off as u64))?;
            f.write_all(&zeros)?;
        }
        for &j in &sidecar.devices {
            let path = dir.join(device_file_name(j));
            if !path.exists() {
                continue;
            }
            let len = fs::metadata(&path)?.len() as usize;
            let mut f = fs::OpenOptions::new().write(true).open(&path)?;
            f.seek(SeekFrom::Start(HEADER_LEN as u64))?;
            f.write_all(&vec![0u8; len.saturating_sub(HEADER_LEN)])?;
        }
    }

    let path = dir.join(SIDECAR_NAME);
    fs::write(&path, sidecar.render())?;
    Ok(path)
}

/// Read back one device header, mostly for tooling and tests.
pub fn read_header(dir: &Path, device: usize) -> Result<ContainerHeader, ContainerError> {
    let mut f = fs::File::open(dir.join(device_file_name(device)))?;
    let mut buf = [0u8; HEADER_LEN];
    let mut got = 0;
    while got < HEADER_LEN {
        let k = f.read(&mut buf[got..])?;
        if k == 0 {
            return Err(ContainerError::TruncatedHeader { got });
        }
        got += k;
    }
    ContainerHeader::decode(&buf)
}
