//! Polar encoder `x = u·F^{⊗n}` (no bit reversal) and an LLR-domain
//! successive-cancellation decoder with the same natural channel order.

use crate::construction::FrozenSet;
use crate::error::{Error, Result};

/// Information bits, one `0`/`1` byte per bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoWord(Vec<u8>);

/// Encoded block, one `0`/`1` byte per bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(Vec<u8>);

/// Channel LLRs `ln W(y|0)/W(y|1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(Vec<f64>);

fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(i) => Err(Error::InvalidArgument(format!(
            "bit {i} has value {}",
            bits[i]
        ))),
        None => Ok(()),
    }
}

impl InfoWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        check_bits(&bits)?;
        Ok(Self(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Codeword {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if !bits.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "codeword length {} is not a power of two",
                bits.len()
            )));
        }
        check_bits(&bits)?;
        Ok(Self(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Noiseless channel observation: `+magnitude` for 0, `-magnitude` for 1.
    pub fn to_noiseless_llr(&self, magnitude: f64) -> LlrVector {
        LlrVector(
            self.0
                .iter()
                .map(|&b| if b == 0 { magnitude } else { -magnitude })
                .collect(),
        )
    }
}

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "LLR {i} is not finite: {}",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// In-place `x <- x·F^{⊗n}` over GF(2). The transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (left, right) = block.split_at_mut(half);
            for (l, r) in left.iter_mut().zip(right.iter()) {
                *l ^= *r;
            }
        }
        half *= 2;
    }
}

/// Check-node combine in the LLR domain, `2·atanh(tanh(a/2)·tanh(b/2))`.
#[inline]
pub fn check_node(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Variable-node combine: `b + a` when the partner bit is 0, `b - a` when 1.
#[inline]
pub fn variable_node(a: f64, b: f64, partner: u8) -> f64 {
    if partner == 0 {
        b + a
    } else {
        b - a
    }
}

/// A frozen set prepared for repeated encoding and decoding.
#[derive(Debug, Clone)]
pub struct PolarCode {
    frozen_mask: Vec<bool>,
    info_positions: Vec<usize>,
}

impl PolarCode {
    pub fn new(frozen: &FrozenSet) -> Self {
        Self {
            frozen_mask: frozen.mask(),
            info_positions: frozen.info_positions(),
        }
    }

    pub fn n(&self) -> usize {
        self.frozen_mask.len()
    }

    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    /// Places `info` on the information positions, zeros elsewhere, and
    /// transforms into `out`.
    pub fn encode_into(&self, info: &[u8], out: &mut [u8]) -> Result<()> {
        if info.len() != self.k() {
            return Err(Error::SizeMismatch {
                expected: self.k(),
                actual: info.len(),
            });
        }
        if out.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: out.len(),
            });
        }
        out.fill(0);
        for (&pos, &bit) in self.info_positions.iter().zip(info) {
            out[pos] = bit;
        }
        polar_transform(out);
        Ok(())
    }

    pub fn encode(&self, info: &InfoWord) -> Result<Codeword> {
        let mut out = vec![0u8; self.n()];
        self.encode_into(info.bits(), &mut out)?;
        Ok(Codeword(out))
    }
}

/// Successive-cancellation decoder with per-level scratch buffers; one
/// instance per thread.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    levels: usize,
    /// `llr[l]` holds the 2^l LLRs entering a subtree at depth `n - l`.
    llr: Vec<Vec<f64>>,
    /// `partial[l]` holds the re-encoded bits leaving that subtree.
    partial: Vec<Vec<u8>>,
    uhat: Vec<u8>,
}

impl ScDecoder {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "block length must be a power of two");
        let levels = n.trailing_zeros() as usize;
        Self {
            levels,
            llr: (0..=levels).map(|l| vec![0.0; 1 << l]).collect(),
            partial: (0..=levels).map(|l| vec![0; 1 << l]).collect(),
            uhat: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        1 << self.levels
    }

    /// Decodes one block; returns the full estimate `û` (frozen positions
    /// forced to 0). Information bits are `û` at the code's info positions.
    pub fn decode(&mut self, channel: &[f64], frozen_mask: &[bool]) -> Result<&[u8]> {
        let n = self.n();
        if channel.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: channel.len(),
            });
        }
        if frozen_mask.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: frozen_mask.len(),
            });
        }
        self.llr[self.levels].copy_from_slice(channel);
        self.descend(self.levels, 0, frozen_mask);
        Ok(&self.uhat)
    }

    /// Decodes and writes the information bits into `info_out`.
    pub fn decode_info(&mut self, channel: &[f64], code: &PolarCode, info_out: &mut [u8]) -> Result<()> {
        if info_out.len() != code.k() {
            return Err(Error::SizeMismatch {
                expected: code.k(),
                actual: info_out.len(),
            });
        }
        self.decode(channel, code.frozen_mask())?;
        for (out, &pos) in info_out.iter_mut().zip(code.info_positions()) {
            *out = self.uhat[pos];
        }
        Ok(())
    }

    fn descend(&mut self, level: usize, offset: usize, frozen: &[bool]) {
        if level == 0 {
            let bit = if frozen[offset] || self.llr[0][0] >= 0.0 {
                0
            } else {
                1
            };
            self.uhat[offset] = bit;
            self.partial[0][0] = bit;
            return;
        }
        let half = 1 << (level - 1);
        {
            let (lower, upper) = self.llr.split_at_mut(level);
            let (a, b) = upper[0].split_at(half);
            for ((out, &x), &y) in lower[level - 1].iter_mut().zip(a).zip(b) {
                *out = check_node(x, y);
            }
        }
        self.descend(level - 1, offset, frozen);
        {
            let (lower, upper) = self.partial.split_at_mut(level);
            upper[0][..half].copy_from_slice(&lower[level - 1]);
        }
        {
            let (lower, upper) = self.llr.split_at_mut(level);
            let (a, b) = upper[0].split_at(half);
            let left = &self.partial[level][..half];
            for (((out, &x), &y), &u) in lower[level - 1].iter_mut().zip(a).zip(b).zip(left) {
                *out = variable_node(x, y, u);
            }
        }
        self.descend(level - 1, offset + half, frozen);
        let (lower, upper) = self.partial.split_at_mut(level);
        let (left, right) = upper[0].split_at_mut(half);
        for ((l, r), &w) in left.iter_mut().zip(right.iter_mut()).zip(&lower[level - 1]) {
            *l ^= w;
            *r = w;
        }
    }
}

/// One-shot encoder.
pub fn encode(info: &InfoWord, frozen: &FrozenSet) -> Result<Codeword> {
    if info.len() + frozen.len() != frozen.n() {
        return Err(Error::SizeMismatch {
            expected: frozen.k(),
            actual: info.len(),
        });
    }
    PolarCode::new(frozen).encode(info)
}

/// One-shot SC decode returning `(û, information bits)`.
pub fn decode_sc(llr: &LlrVector, frozen: &FrozenSet) -> Result<(Vec<u8>, InfoWord)> {
    let code = PolarCode::new(frozen);
    let mut dec = ScDecoder::new(frozen.n());
    let mut info = vec![0u8; code.k()];
    dec.decode_info(llr.values(), &code, &mut info)?;
    Ok((dec.uhat.clone(), InfoWord(info)))
}
