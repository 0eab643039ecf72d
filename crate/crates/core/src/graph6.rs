//! graph6 encoding (upper-triangle bits, column-major, 6 bits per byte).

use thiserror::Error;

use crate::graph::{Graph, GraphError, MAX_VERTICES};

const HEADER: &[u8] = b">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("byte {offset}: value {value} outside the printable range 63..=126")]
    BadByte { offset: usize, value: u8 },
    #[error("byte {offset}: record ended inside the size field")]
    TruncatedSize { offset: usize },
    #[error("byte {offset}: expected {expected} body bytes for n = {n}, found {found}")]
    BodyLength {
        offset: usize,
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: padding bits are not zero")]
    NonZeroPadding { offset: usize },
    #[error("vertex count {0} not supported")]
    VertexCount(usize),
}

impl From<GraphError> for Graph6Error {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::VertexCount(n) => Graph6Error::VertexCount(n),
            // from_fn never produces the other variants
            _ => unreachable!("unexpected graph error: {e}"),
        }
    }
}

fn body_len(n: usize) -> usize {
    (n * (n - 1) / 2).div_ceil(6)
}

/// Decodes one graph6 record. An optional `>>graph6<<` header is skipped;
/// surrounding whitespace is not.
pub fn decode(bytes: &[u8]) -> Result<Graph, Graph6Error> {
    let start = if bytes.starts_with(HEADER) { HEADER.len() } else { 0 };
    let rec = &bytes[start..];
    let check = |i: usize| -> Result<u8, Graph6Error> {
        let b = *rec.get(i).ok_or(Graph6Error::TruncatedSize { offset: start + i })?;
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte { offset: start + i, value: b });
        }
        Ok(b - 63)
    };

    let (n, header_len) = match check(0)? {
        63 => match check(1)? {
            63 => {
                let mut n = 0usize;
                for i in 2..8 {
                    n = (n << 6) | check(i)? as usize;
                }
                (n, 8)
            }
            _ => {
                let mut n = 0usize;
                for i in 1..4 {
                    n = (n << 6) | check(i)? as usize;
                }
                (n, 4)
            }
        },
        small => (small as usize, 1),
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(Graph6Error::VertexCount(n));
    }

    let body = &rec[header_len..];
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte {
                offset: start + header_len + i,
                value: b,
            });
        }
    }
    let expected = body_len(n);
    if body.len() != expected {
        return Err(Graph6Error::BodyLength {
            offset: start + header_len,
            n,
            expected,
            found: body.len(),
        });
    }
    let total_bits = n * (n - 1) / 2;
    if expected > 0 {
        let pad = expected * 6 - total_bits;
        let last = body[expected - 1] - 63;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(Graph6Error::NonZeroPadding {
                offset: start + header_len + expected - 1,
            });
        }
    }

    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    // column-major: bit index of (i, j), i < j, is j(j-1)/2 + i
    Ok(Graph::from_fn(n, |i, j| bit(j * (j - 1) / 2 + i))?)
}

/// Decodes a UTF-8 graph6 line, ignoring surrounding whitespace.
pub fn decode_str(s: &str) -> Result<Graph, Graph6Error> {
    decode(s.trim().as_bytes())
}

/// Shortest legal graph6 record for `g`, without header or newline.
pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + body_len(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    // every byte is in 63..=126
    String::from_utf8(encode(g)).expect("graph6 is ASCII")
}
