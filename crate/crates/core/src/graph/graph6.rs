//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix in column-major order, packed six bits per byte
//! (big-endian within each group) and offset by 63.

use super::{Graph, GraphError};

const HEADER: &str = ">>graph6<<";
const MAX_N: usize = 68_719_476_735; // 2^36 - 1

fn parse_err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 { offset, reason: reason.into() }
}

/// Decodes one graph6 record. Trailing `\n`/`\r` and the optional
/// `>>graph6<<` header are accepted.
pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (start, body) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, trimmed.as_bytes()),
    };
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(start + i, format!("byte {b:#04x} outside 63..=126")));
        }
    }
    let (n, header_len) = decode_size(body).map_err(|(off, why)| parse_err(start + off, why))?;

    let bits_needed = n * n.saturating_sub(1) / 2;
    let bytes_needed = bits_needed.div_ceil(6);
    let data = &body[header_len..];
    if data.len() != bytes_needed {
        return Err(parse_err(
            start + header_len + data.len().min(bytes_needed),
            format!("expected {bytes_needed} data bytes for n={n}, found {}", data.len()),
        ));
    }

    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    if bits_needed % 6 != 0 {
        let last = data[bytes_needed - 1] - 63;
        let pad = 6 - bits_needed % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(start + header_len + bytes_needed - 1, "nonzero padding bits"));
        }
    }
    Graph::new(n, pairs)
}

fn decode_size(body: &[u8]) -> Result<(usize, usize), (usize, String)> {
    let first = *body.first().ok_or((0, "empty record".to_string()))?;
    let read = |from: usize, count: usize| -> Result<usize, (usize, String)> {
        if body.len() < from + count {
            return Err((body.len(), "truncated size header".to_string()));
        }
        Ok(body[from..from + count]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
    };
    if first != 126 {
        return Ok(((first - 63) as usize, 1));
    }
    if body.get(1) == Some(&126) {
        let n = read(2, 6)?;
        if n <= 258_047 {
            return Err((0, format!("non-canonical 8-byte size header for n={n}")));
        }
        Ok((n, 8))
    } else {
        let n = read(1, 3)?;
        if n <= 62 {
            return Err((0, format!("non-canonical 4-byte size header for n={n}")));
        }
        Ok((n, 4))
    }
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|s| ((n >> (6 * s)) & 63) as u8 + 63));
    } else {
        assert!(n <= MAX_N, "graph6 cannot encode n={n}");
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|s| ((n >> (6 * s)) & 63) as u8 + 63));
    }
}

/// Canonical graph6 encoding without header or newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_size(n, &mut out);
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
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Parses a graph6 stream: one record per line, blank lines and lines
/// starting with `#` skipped. Each entry carries its 1-based line number.
pub fn parse_graph6_lines(text: &str) -> Vec<(usize, Result<Graph, GraphError>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| (i + 1, from_graph6(l.trim())))
        .collect()
}
