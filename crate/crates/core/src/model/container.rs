// SPDX-License-Identifier: MIT OR Apache-2.0

//! Binary weight container.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic      b"LRPW"
//! version    u32            (= 1)
//! header     u32 × 4        num_layers, hidden, embed, vocab
//! records    until EOF:
//!   name_len u16, name (UTF-8)
//!   rank     u8, dims u32 × rank
//!   payload  f32 × prod(dims), row-major
//! ```
//!
//! Required records: `embedding`, `layer{l}.wx`, `layer{l}.wh`, `layer{l}.b`,
//! `decoder.w`, `decoder.b`. Values are stored as `f32` and widened to `f64`
//! on load.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::Matrix;

use super::weights::{LayerWeights, ModelConfig, WeightContainer};

pub const MAGIC: &[u8; 4] = b"LRPW";
pub const FORMAT_VERSION: u32 = 1;

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Format {
                offset: self.pos as u64,
                message: format!(
                    "unexpected end of file reading {what} ({n} bytes needed, {} left)",
                    self.remaining()
                ),
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        let b = self.take(2, what)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

struct RawTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

fn expected_shapes(config: &ModelConfig) -> HashMap<String, Vec<usize>> {
    let (v, d, h) = (config.vocab_size, config.embed_size, config.hidden_size);
    let mut m = HashMap::new();
    m.insert("embedding".to_string(), vec![v, d]);
    for l in 0..config.num_layers {
        m.insert(
            format!("layer{l}.wx"),
            vec![4 * h, config.layer_input_size(l)],
        );
        m.insert(format!("layer{l}.wh"), vec![4 * h, h]);
        m.insert(format!("layer{l}.b"), vec![4 * h]);
    }
    m.insert("decoder.w".to_string(), vec![v, h]);
    m.insert("decoder.b".to_string(), vec![v]);
    m
}

/// Parses a container from memory and validates it against its own header.
pub fn decode(bytes: &[u8]) -> Result<(ModelConfig, WeightContainer)> {
    let mut cur = Cursor { buf: bytes, pos: 0 };
    let magic = cur.take(4, "magic")?;
    if magic != MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: format!("bad magic {magic:?}, expected {MAGIC:?}"),
        });
    }
    let version = cur.u32("format version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Format {
            offset: 4,
            message: format!("unsupported format version {version}"),
        });
    }
    let config = ModelConfig {
        num_layers: cur.u32("num_layers")? as usize,
        hidden_size: cur.u32("hidden size")? as usize,
        embed_size: cur.u32("embed size")? as usize,
        vocab_size: cur.u32("vocab size")? as usize,
    };
    config.validate().map_err(|e| Error::Format {
        offset: 8,
        message: e.to_string(),
    })?;

    let shapes = expected_shapes(&config);
    let mut tensors: HashMap<String, RawTensor> = HashMap::new();
    while cur.remaining() > 0 {
        let offset = cur.pos as u64;
        let name_len = cur.u16("tensor name length")? as usize;
        let name = std::str::from_utf8(cur.take(name_len, "tensor name")?)
            .map_err(|_| Error::Format {
                offset,
                message: "tensor name is not valid UTF-8".into(),
            })?
            .to_string();
        let Some(expected) = shapes.get(&name) else {
            return Err(Error::Format {
                offset,
                message: format!("unknown tensor `{name}`"),
            });
        };
        if tensors.contains_key(&name) {
            return Err(Error::Format {
                offset,
                message: format!("duplicate tensor `{name}`"),
            });
        }
        let rank = cur.u8("tensor rank")? as usize;
        let mut dims = Vec::with_capacity(rank);
        for _ in 0..rank {
            dims.push(cur.u32("tensor dims")? as usize);
        }
        if &dims != expected {
            return Err(Error::DimensionMismatch {
                tensor: name,
                offset,
                expected: expected.clone(),
                found: dims,
            });
        }
        let count: usize = dims.iter().product();
        let payload = cur.take(count * 4, &format!("payload of `{name}`"))?;
        let mut data = Vec::with_capacity(count);
        for (index, chunk) in payload.chunks_exact(4).enumerate() {
            let v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            if !v.is_finite() {
                return Err(Error::NonFiniteTensor {
                    tensor: name,
                    offset,
                    index,
                });
            }
            data.push(f64::from(v));
        }
        tensors.insert(name, RawTensor { dims, data });
    }

    let mut take = |name: &str| -> Result<RawTensor> {
        tensors
            .remove(name)
            .ok_or_else(|| Error::MissingTensor(name.to_string()))
    };
    let matrix = |t: RawTensor| Matrix::from_vec(t.dims[0], t.dims[1], t.data);

    let embedding = matrix(take("embedding")?);
    let mut layers = Vec::with_capacity(config.num_layers);
    for l in 0..config.num_layers {
        layers.push(LayerWeights {
            input_weights: matrix(take(&format!("layer{l}.wx"))?),
            recurrent_weights: matrix(take(&format!("layer{l}.wh"))?),
            bias: take(&format!("layer{l}.b"))?.data,
        });
    }
    let decoder_weights = matrix(take("decoder.w")?);
    let decoder_bias = take("decoder.b")?.data;
    let weights = WeightContainer {
        embedding,
        layers,
        decoder_weights,
        decoder_bias,
    };
    Ok((config, weights))
}

fn push_record(out: &mut Vec<u8>, name: &str, dims: &[usize], data: &[f64]) {
    out.extend_from_slice(&(name.len() as u16).to_le_bytes());
    out.extend_from_slice(name.as_bytes());
    out.push(dims.len() as u8);
    for &d in dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for &v in data {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
}

/// Serializes weights, narrowing every value to `f32`.
pub fn encode(config: &ModelConfig, weights: &WeightContainer) -> Result<Vec<u8>> {
    weights.validate(config)?;
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [
        config.num_layers,
        config.hidden_size,
        config.embed_size,
        config.vocab_size,
    ] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    let m = &weights.embedding;
    push_record(&mut out, "embedding", &[m.rows(), m.cols()], m.as_slice());
    for (l, layer) in weights.layers.iter().enumerate() {
        let wx = &layer.input_weights;
        let wh = &layer.recurrent_weights;
        push_record(
            &mut out,
            &format!("layer{l}.wx"),
            &[wx.rows(), wx.cols()],
            wx.as_slice(),
        );
        push_record(
            &mut out,
            &format!("layer{l}.wh"),
            &[wh.rows(), wh.cols()],
            wh.as_slice(),
        );
        push_record(
            &mut out,
            &format!("layer{l}.b"),
            &[layer.bias.len()],
            &layer.bias,
        );
    }
    let d = &weights.decoder_weights;
    push_record(&mut out, "decoder.w", &[d.rows(), d.cols()], d.as_slice());
    push_record(
        &mut out,
        "decoder.b",
        &[weights.decoder_bias.len()],
        &weights.decoder_bias,
    );
    Ok(out)
}

pub fn read_container(path: impl AsRef<Path>) -> Result<(ModelConfig, WeightContainer)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

pub fn write_container(
    path: impl AsRef<Path>,
    config: &ModelConfig,
    weights: &WeightContainer,
) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(config, weights)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
