//! Portable bitmap (P1 / P4) ingestion.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Cell, CellBox, Hit, Level, Oracle, Rect, SetSpec};

/// A bitmap-backed set together with its native level: one pixel per cell.
#[derive(Debug, Clone)]
pub struct PbmSpec {
    pub spec: SetSpec,
    pub level: Level,
}

pub fn from_pbm(path: impl AsRef<Path>) -> Result<PbmSpec> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "pbm".to_string());
    from_pbm_bytes(&name, &bytes)
}

pub fn from_pbm_bytes(name: &str, bytes: &[u8]) -> Result<PbmSpec> {
    let (w, h, pixels) = parse(bytes)?;
    let mut n = 0u32;
    while (1usize << n) < w.max(h) {
        n += 1;
    }
    let level = Level::new(n, 2)?;
    // Row 0 of the file is the top of the picture.
    let cells: Vec<Cell> = (0..h)
        .flat_map(|row| (0..w).map(move |x| (x, row)))
        .filter(|&(x, row)| pixels[row * w + x])
        .map(|(x, row)| Cell::new(x as i64, (h - 1 - row) as i64))
        .collect();
    if cells.is_empty() {
        return Ok(PbmSpec {
            spec: SetSpec::empty(name, 2),
            level,
        });
    }
    let side = level.cell_size();
    let bbox = Rect::new(0.0, 0.0, w as f64 * side, h as f64 * side);
    let oracle = Bitmap::new(n, w, h, &cells);
    Ok(PbmSpec {
        spec: SetSpec::new(name, Some(bbox), 2, Arc::new(oracle)),
        level,
    })
}

/// Tokenizer over the header: whitespace separated, `#` starts a comment.
struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Parse(format!("bad number: {e}")))
    }
}

fn parse(bytes: &[u8]) -> Result<(usize, usize, Vec<bool>)> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'1' | b'4') {
        return Err(Error::Parse("not a P1 or P4 bitmap".into()));
    }
    let binary = bytes[1] == b'4';
    let mut hd = Header { bytes, pos: 2 };
    let w = hd.number()?;
    let h = hd.number()?;
    if w == 0 || h == 0 {
        return Err(Error::Parse(format!("degenerate bitmap size {w}x{h}")));
    }
    if w > 1 << 14 || h > 1 << 14 {
        return Err(Error::Parse(format!(
            "bitmap {w}x{h} exceeds 16384 pixels per side"
        )));
    }
    let mut pixels = vec![false; w * h];
    if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = hd.pos + 1;
        let stride = w.div_ceil(8);
        let data = bytes.get(start..).unwrap_or(&[]);
        if data.len() < stride * h {
            return Err(Error::Parse(format!(
                "raster truncated: {} of {} bytes",
                data.len(),
                stride * h
            )));
        }
        for row in 0..h {
            for x in 0..w {
                let byte = data[row * stride + x / 8];
                pixels[row * w + x] = byte & (0x80 >> (x % 8)) != 0;
            }
        }
    } else {
        let mut k = 0;
        while k < w * h {
            hd.skip_space();
            match bytes.get(hd.pos) {
                Some(b'0') => pixels[k] = false,
                Some(b'1') => pixels[k] = true,
                Some(&c) => {
                    return Err(Error::Parse(format!(
                        "unexpected byte {:?} in raster",
                        c as char
                    )))
                }
                None => return Err(Error::Parse(format!("raster truncated at pixel {k}"))),
            }
            hd.pos += 1;
            k += 1;
        }
    }
    Ok((w, h, pixels))
}

/// Pixel set with a summed-area table, so every dyadic block is one lookup.
struct Bitmap {
    n: u32,
    w: usize,
    h: usize,
    sums: Vec<u32>,
}

impl Bitmap {
    fn new(n: u32, w: usize, h: usize, cells: &[Cell]) -> Bitmap {
        let mut grid = vec![0u32; w * h];
        for c in cells {
            grid[c.j as usize * w + c.i as usize] = 1;
        }
        let mut sums = vec![0u32; (w + 1) * (h + 1)];
        for j in 0..h {
            for i in 0..w {
                sums[(j + 1) * (w + 1) + i + 1] =
                    grid[j * w + i] + sums[j * (w + 1) + i + 1] + sums[(j + 1) * (w + 1) + i]
                        - sums[j * (w + 1) + i];
            }
        }
        Bitmap { n, w, h, sums }
    }

    /// Black pixels in `[i0, i1) x [j0, j1)`, clipped to the image.
    fn count(&self, i0: i64, j0: i64, i1: i64, j1: i64) -> u32 {
        let ci = |v: i64| v.clamp(0, self.w as i64) as usize;
        let cj = |v: i64| v.clamp(0, self.h as i64) as usize;
        let (i0, i1, j0, j1) = (ci(i0), ci(i1), cj(j0), cj(j1));
        if i0 >= i1 || j0 >= j1 {
            return 0;
        }
        let s = |i: usize, j: usize| self.sums[j * (self.w + 1) + i];
        s(i1, j1) + s(i0, j0) - s(i0, j1) - s(i1, j0)
    }
}

impl Oracle for Bitmap {
    fn classify(&self, b: CellBox) -> Hit {
        let d = b.level.n;
        let c = b.cell;
        let hit = if d <= self.n {
            let s = 1i64 << (self.n - d);
            self.count(c.i * s, c.j * s, (c.i + 1) * s, (c.j + 1) * s) > 0
        } else {
            let p = c.ancestor(2, d - self.n);
            self.count(p.i, p.j, p.i + 1, p.j + 1) > 0
        };
        if hit {
            Hit::Intersects
        } else {
            Hit::Disjoint
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{label_components, rasterize, Connectivity};

    fn p1(rows: &[&str]) -> Vec<u8> {
        let w = rows[0].len();
        let mut s = format!("P1\n# test image\n{} {}\n", w, rows.len());
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        s.into_bytes()
    }

    #[test]
    fn all_black_is_the_unit_square() {
        let img = p1(&["11111111"; 8]);
        let p = from_pbm_bytes("black", &img).unwrap();
        assert_eq!(p.level, Level::new(3, 2).unwrap());
        let k = rasterize(&p.spec, p.level).unwrap();
        assert_eq!(k.len(), 64);
        assert_eq!(k.bbox(), Some(Rect::new(0.0, 0.0, 1.0, 1.0)));
    }

    #[test]
    fn all_white_is_empty() {
        let p = from_pbm_bytes("white", &p1(&["0000"; 4])).unwrap();
        assert!(p.spec.bbox.is_none());
        assert!(rasterize(&p.spec, p.level).unwrap().is_empty());
    }

    #[test]
    fn checkerboard_components() {
        let img = p1(&["1010", "0101", "1010", "0101"]);
        let p = from_pbm_bytes("check", &img).unwrap();
        let k = rasterize(&p.spec, p.level).unwrap();
        assert_eq!(k.len(), 8);
        assert_eq!(label_components(&k, Connectivity::Four).len(), 8);
        assert_eq!(label_components(&k, Connectivity::Eight).len(), 1);
    }

    #[test]
    fn p4_matches_p1() {
        // 10 pixels wide: two bytes per row, MSB first.
        let rows = ["1100000001", "0000000000", "0011110000"];
        let mut p4 = b"P4\n10 3\n".to_vec();
        for r in rows {
            let mut bytes = [0u8; 2];
            for (x, ch) in r.bytes().enumerate() {
                if ch == b'1' {
                    bytes[x / 8] |= 0x80 >> (x % 8);
                }
            }
            p4.extend(bytes);
        }
        let a = from_pbm_bytes("a", &p4).unwrap();
        let b = from_pbm_bytes("b", &p1(&rows)).unwrap();
        assert_eq!(a.level, b.level);
        let ka = rasterize(&a.spec, a.level).unwrap();
        let kb = rasterize(&b.spec, b.level).unwrap();
        assert_eq!(
            ka.cells().collect::<Vec<_>>(),
            kb.cells().collect::<Vec<_>>()
        );
        // Top file row maps to the highest cell row.
        assert!(ka.contains(Cell::new(0, 2)));
        assert!(ka.contains(Cell::new(9, 2)));
        assert!(ka.contains(Cell::new(2, 0)));
    }

    #[test]
    fn unseparated_p1_digits() {
        let p = from_pbm_bytes("x", b"P1 2 2 1001").unwrap();
        let k = rasterize(&p.spec, p.level).unwrap();
        assert_eq!(
            k.cells().collect::<Vec<_>>(),
            vec![Cell::new(1, 0), Cell::new(0, 1)]
        );
    }

    #[test]
    fn coarse_levels_are_block_unions() {
        let img = p1(&["0000", "0000", "0000", "0001"]);
        let p = from_pbm_bytes("dot", &img).unwrap();
        let k = rasterize(&p.spec, Level::new(1, 2).unwrap()).unwrap();
        assert_eq!(k.cells().collect::<Vec<_>>(), vec![Cell::new(1, 0)]);
        let fine = rasterize(&p.spec, Level::new(4, 2).unwrap()).unwrap();
        assert_eq!(fine.len(), 16);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            from_pbm_bytes("x", b"P2 1 1 0"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            from_pbm_bytes("x", b"P1 0 3"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            from_pbm_bytes("x", b"P1 2 2 10"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            from_pbm_bytes("x", b"P4 8 2\n\x01"),
            Err(Error::Parse(_))
        ));
    }
}
