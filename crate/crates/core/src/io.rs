//! Text formats for orientations (`HCO 1`) and k-ary markings (`KHM 1`).
//!
//! An `HCO 1` file is the header `HCO 1 n=<n> a=<a> b=<b>` followed by the
//! canonical edge bits as `0`/`1`, 120 per line; only the last line may be
//! shorter. A `KHM 1` file is the header `KHM 1 k=<k> n=<n>` followed by one
//! marked digit per line of the cube, in canonical line order.

use std::fmt::Write as _;

use crate::cube::Orientation;
use crate::error::{Error, Result};
use crate::kary::{KaryCube, Marking};

pub const HCO_WIDTH: usize = 120;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcoFile {
    pub orientation: Orientation,
    pub a: u32,
    pub b: u32,
}

pub fn write_hco(o: &Orientation, a: u32, b: u32) -> String {
    let m = o.num_edges() as usize;
    let mut s = String::with_capacity(m + m / HCO_WIDTH + 64);
    let _ = writeln!(s, "HCO 1 n={} a={a} b={b}", o.dim());
    for idx in 0..m {
        s.push(if o.bit(idx as u64) { '1' } else { '0' });
        if (idx + 1) % HCO_WIDTH == 0 || idx + 1 == m {
            s.push('\n');
        }
    }
    s
}

/// Parses `key=value` fields of a header after its two leading tokens.
fn header_fields<'a>(
    line: &'a str,
    magic: &str,
    keys: &[&str],
) -> Result<Vec<u32>> {
    let mut tokens = line.split(' ');
    let mut col = 1;
    let mut next = |expect: &str| -> Result<(&'a str, usize)> {
        let tok = tokens.next().ok_or_else(|| Error::parse(1, col, format!("expected {expect}")))?;
        let at = col;
        col += tok.len() + 1;
        Ok((tok, at))
    };
    let (tok, at) = next(magic)?;
    if tok != magic {
        return Err(Error::parse(1, at, format!("expected `{magic}`, found `{tok}`")));
    }
    let (tok, at) = next("version")?;
    if tok != "1" {
        return Err(Error::parse(1, at, format!("unsupported version `{tok}`")));
    }
    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let (tok, at) = next(&format!("{key}=<value>"))?;
        let value = tok
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| Error::parse(1, at, format!("expected `{key}=`, found `{tok}`")))?;
        let v = value
            .parse::<u32>()
            .map_err(|_| Error::parse(1, at + key.len() + 1, format!("bad value `{value}` for {key}")))?;
        values.push(v);
    }
    if let Ok((tok, at)) = next("end of header") {
        return Err(Error::parse(1, at, format!("unexpected `{tok}` in header")));
    }
    Ok(values)
}

pub fn read_hco(text: &str) -> Result<HcoFile> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let vals = header_fields(header, "HCO", &["n", "a", "b"])?;
    let (n, a, b) = (vals[0], vals[1], vals[2]);
    let mut o = Orientation::new(n).map_err(|e| Error::parse(1, 1, e.to_string()))?;
    let m = o.num_edges();
    let mut idx = 0u64;
    let mut body_lines = 0u64;
    for (li, line) in lines.enumerate() {
        let lineno = li + 2;
        if idx == m {
            return Err(Error::parse(lineno, 1, format!("stream longer than the {m} edges of n={n}")));
        }
        body_lines += 1;
        let want = (m - idx).min(HCO_WIDTH as u64) as usize;
        for (c, ch) in line.bytes().enumerate() {
            if c >= want {
                return Err(Error::parse(lineno, c + 1, format!("line longer than {want} characters")));
            }
            match ch {
                b'0' => {}
                b'1' => o.set_bit(idx, true),
                _ => return Err(Error::parse(lineno, c + 1, format!("expected 0 or 1, found {:?}", ch as char))),
            }
            idx += 1;
        }
        if line.len() < want {
            return Err(Error::parse(
                lineno,
                line.len() + 1,
                format!("line has {} bits, expected {want}", line.len()),
            ));
        }
    }
    if idx < m {
        return Err(Error::parse(
            body_lines as usize + 2,
            1,
            format!("stream has {idx} bits but n={n} has {m} edges"),
        ));
    }
    Ok(HcoFile { orientation: o, a, b })
}

pub fn write_khm(m: &Marking) -> String {
    let cube = m.cube();
    let mut s = String::with_capacity(m.marks().len() * 2 + 32);
    let _ = writeln!(s, "KHM 1 k={} n={}", cube.k, cube.n);
    for &d in m.marks() {
        let _ = writeln!(s, "{d}");
    }
    s
}

pub fn read_khm(text: &str) -> Result<Marking> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let vals = header_fields(header, "KHM", &["k", "n"])?;
    let cube = KaryCube::new(vals[0], vals[1]).map_err(|e| Error::parse(1, 1, e.to_string()))?;
    let total = cube.num_lines() as usize;
    let mut marks = Vec::with_capacity(total);
    for (li, line) in lines.enumerate() {
        let lineno = li + 2;
        if marks.len() == total {
            return Err(Error::parse(lineno, 1, format!("more than {total} lines")));
        }
        let d: u32 = line
            .parse()
            .map_err(|_| Error::parse(lineno, 1, format!("expected a digit, found `{line}`")))?;
        if d >= cube.k {
            return Err(Error::parse(lineno, 1, format!("digit {d} not below k={}", cube.k)));
        }
        marks.push(d as u8);
    }
    if marks.len() != total {
        return Err(Error::parse(marks.len() + 2, 1, format!("{} marks for {total} lines", marks.len())));
    }
    Marking::new(cube, marks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::construct;

    #[test]
    fn hco_layout() {
        let o = construct(1, 3, 3).unwrap();
        let text = write_hco(&o, 1, 3);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("HCO 1 n=3 a=1 b=3"));
        assert_eq!(lines.next().unwrap().len(), 12);
        assert_eq!(lines.next(), None);

        let o = construct(1, 5, 8).unwrap(); // 1024 edges
        let text = write_hco(&o, 1, 5);
        let lens: Vec<usize> = text.lines().skip(1).map(str::len).collect();
        assert_eq!(lens.len(), 9);
        assert!(lens[..8].iter().all(|&l| l == 120));
        assert_eq!(lens[8], 1024 - 960);
        assert_eq!(read_hco(&text).unwrap(), HcoFile { orientation: o, a: 1, b: 5 });
    }

    #[test]
    fn hco_exact_multiple_of_width() {
        // n=15 has 245760 = 2048 * 120 edges: every line is full
        let mut o = Orientation::new(15).unwrap();
        o.set_bit(245759, true);
        let text = write_hco(&o, 7, 15);
        assert_eq!(text.lines().count(), 1 + 2048);
        assert!(text.lines().skip(1).all(|l| l.len() == 120));
        assert!(text.ends_with("1\n"));
        assert_eq!(read_hco(&text).unwrap().orientation, o);
        assert_eq!(read_hco(text.trim_end()).unwrap().orientation, o);
        assert!(read_hco(&format!("{text}\n")).is_err());
    }

    #[test]
    fn hco_errors_have_positions() {
        let bad = |t: &str| read_hco(t).unwrap_err();
        assert_eq!(bad(""), Error::parse(1, 1, "empty file"));
        assert!(matches!(bad("HCX 1 n=2 a=1 b=1\n0000\n"), Error::Parse { line: 1, column: 1, .. }));
        assert!(matches!(bad("HCO 2 n=2 a=1 b=1\n0000\n"), Error::Parse { line: 1, column: 5, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=x b=1\n0000\n"), Error::Parse { line: 1, column: 13, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1\n0000\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1 b=1\n0020\n"), Error::Parse { line: 2, column: 3, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1 b=1\n000\n"), Error::Parse { line: 2, column: 4, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1 b=1\n00000\n"), Error::Parse { line: 2, column: 5, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1 b=1\n0000\n1\n"), Error::Parse { line: 3, .. }));
        assert!(matches!(bad("HCO 1 n=2 a=1 b=1\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(bad("HCO 1 n=0 a=1 b=1\n"), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn hco_rejects_short_inner_lines() {
        let o = construct(1, 5, 8).unwrap();
        let text = write_hco(&o, 1, 5);
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let moved = lines[1].pop().unwrap();
        lines[2].insert(0, moved);
        let err = read_hco(&lines.join("\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 120, .. }), "{err}");
    }

    #[test]
    fn khm_roundtrip_and_errors() {
        let m = crate::kary::perfect_block_marking(3).unwrap();
        let text = write_khm(&m);
        assert!(text.starts_with("KHM 1 k=3 n=3\n"));
        assert_eq!(text.lines().count(), 1 + 27);
        assert_eq!(read_khm(&text).unwrap(), m);
        assert!(matches!(read_khm("KHM 1 k=3 n=2\n0\n3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read_khm("KHM 1 k=3 n=1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_khm("KHM 1 k=3 n=1\n0\n1\n"), Err(Error::Parse { line: 3, .. })));
    }
}
