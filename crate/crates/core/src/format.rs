//! Graph ingestion and emission: graph6 strings and the JSON wire form
//! `{"n": int, "edges": [[u,v],...]}`. Round-trips are bit-exact.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

/// Encodes a graph as a graph6 string (no header).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258047 {
        out.push(126);
        out.push(63 + ((n >> 12) & 0x3f) as u8);
        out.push(63 + ((n >> 6) & 0x3f) as u8);
        out.push(63 + (n & 0x3f) as u8);
    } else {
        // Out of this crate's supported range (~10^4 vertices); the 8-byte
        // form is never produced here.
        panic!("graph too large for graph6 emission: {}", n);
    }
    let mut bits: u32 = 0;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            bits = (bits << 1) | u32::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push(63 + bits as u8);
                bits = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        bits <<= 6 - nbits;
        out.push(63 + bits as u8);
    }
    String::from_utf8(out).unwrap()
}

/// Parses a graph6 string. The optional `>>graph6<<` header is accepted.
/// The parser is strict: exact payload length, characters in `?`..`~`, and
/// zero padding bits, so that `to_graph6(from_graph6(s)) == s`.
pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let s = s.trim_end_matches(['\n', '\r']);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::parse("empty graph6 string"));
    }
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(format!("invalid graph6 byte {:#04x}", b)));
        }
    }
    let (n, body) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::parse("graph6 8-byte order form not supported"));
        }
        if bytes.len() < 4 {
            return Err(Error::parse("truncated graph6 size"));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        if n <= 62 {
            return Err(Error::parse("non-canonical graph6 size encoding"));
        }
        (n, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    let nbits = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let expect = nbits.div_ceil(6);
    if body.len() != expect {
        return Err(Error::parse(format!(
            "graph6 payload length {} does not match order {} (expected {})",
            body.len(),
            n,
            expect
        )));
    }
    let mut g = Graph::new(n);
    let mut idx = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6] - 63;
            let bit = (byte >> (5 - idx % 6)) & 1;
            if bit == 1 {
                g.add_edge(i, j);
            }
            idx += 1;
            if idx == nbits {
                break 'outer;
            }
        }
    }
    // Padding bits must be zero for a canonical encoding.
    if nbits % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::parse("nonzero padding bits in graph6 string"));
        }
    }
    Ok(g)
}

/// Parses the JSON wire form `{"n": int, "edges": [[u,v],...]}`.
pub fn from_json(s: &str) -> Result<Graph> {
    serde_json::from_str(s).map_err(|e| Error::parse(format!("graph json: {}", e)))
}

/// Emits the JSON wire form with edges sorted ascending.
pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(g).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn known_encodings() {
        // K_4 is "C~" and the 5-cycle is "DqK" in standard graph6.
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        let c5 = from_graph6("DqK").unwrap();
        assert_eq!(c5.vertex_count(), 5);
        assert_eq!(c5.edge_count(), 5);
        assert!(!c5.is_bipartite());
    }

    #[test]
    fn header_accepted() {
        let g = from_graph6(">>graph6<<C~").unwrap();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [0usize, 1, 2, 5, 13, 62, 63, 64, 100] {
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            let s = to_graph6(&g);
            let h = from_graph6(&s).unwrap();
            assert_eq!(g, h, "graph6 roundtrip failed at n={}", n);
            assert_eq!(to_graph6(&h), s);

            let j = to_json(&g);
            assert_eq!(from_json(&j).unwrap(), g);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("C~extra").is_err());
        assert!(from_graph6("C").is_err());
        assert!(from_graph6("\u{7f}").is_err());
        assert!(from_json("{\"n\": 3, \"edges\": [[0,3]]}").is_err());
        assert!(from_json("{\"n\": 3, \"edges\": [[1,1]]}").is_err());
    }
}
