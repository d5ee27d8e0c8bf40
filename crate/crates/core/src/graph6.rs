//! graph6 encoding and decoding.
//!
//! The byte format follows the standard exactly: `N(n)` is one byte `n + 63`
//! for `n <= 62` or `126` followed by three 6-bit bytes for `n <= 258047`,
//! and `R(x)` packs the upper-triangle bits in colex order, six bits per
//! byte, high bit first, zero-padded. Graphs with deleted labels are written
//! by compacting live labels in ascending order.

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_LONG_N: usize = 258_047;

/// Encodes a graph as a graph6 line (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let labels = g.live_labels();
    let n = labels.len();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else {
        assert!(n <= MAX_LONG_N, "graph6 long form caps at {MAX_LONG_N} vertices");
        bytes.push(126);
        bytes.push(((n >> 12) & 0x3f) as u8 + 63);
        bytes.push(((n >> 6) & 0x3f) as u8 + 63);
        bytes.push((n & 0x3f) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc <<= 1;
            if g.has_edge(labels[i], labels[j]) {
                acc |= 1;
            }
            nbits += 1;
            if nbits == 6 {
                bytes.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        bytes.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

/// Decodes a graph6 line into a graph on labels `0..n`.
pub fn from_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 line".into()));
    }
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6 byte out of range".into()));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(Error::Parse("truncated graph6 size".into()));
        }
        if bytes[1] == 126 {
            return Err(Error::Parse("graph6 very-long size form not supported".into()));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        (n, 4)
    } else {
        (bytes[0] as usize - 63, 1)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expect = bytes.len() - pos;
    if expect != nbits.div_ceil(6) {
        return Err(Error::Parse(format!(
            "graph6 body has {expect} bytes, expected {} for n = {n}",
            nbits.div_ceil(6)
        )));
    }
    let mut g = Graph::edgeless(n);
    let mut acc = 0u8;
    let mut avail = 0;
    for j in 1..n {
        for i in 0..j {
            if avail == 0 {
                acc = bytes[pos] - 63;
                pos += 1;
                avail = 6;
            }
            if acc & (1 << (avail - 1)) != 0 {
                g.add_edge(i, j);
            }
            avail -= 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        // K_3 is "Bw"; the 5-vertex graph with edges 02, 04, 13, 34 is "DQc"
        // (the worked example in nauty's format documentation).
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(to_graph6(&k3), "Bw");
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]);
        assert_eq!(to_graph6(&g), "DQc");
        assert_eq!(from_graph6("Bw").unwrap(), k3);
        assert_eq!(from_graph6("DQc").unwrap(), g);
        assert_eq!(to_graph6(&Graph::edgeless(0)), "?");
    }

    #[test]
    fn round_trip_random_and_large() {
        for trial in 0..500 {
            let n = (trial % 70) as usize;
            let g = Graph::sample_uniform(n, 31_000 + trial);
            assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g, "n = {n}");
        }
    }

    #[test]
    fn header_and_errors() {
        assert!(from_graph6(">>graph6<<Bw").is_ok());
        assert!(from_graph6("").is_err());
        assert!(from_graph6("B").is_err());
        assert!(from_graph6("B\u{7f}w").is_err());
    }
}
