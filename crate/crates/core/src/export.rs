//! CSV and SVG output, plus readers for the CSV files written here.
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit. Header lines start with `#`.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::io::{self, Read, Write};

use crate::dynamics::Trajectory;
use crate::stability::regions::GridSpec;
use crate::stability::BoundaryCurve;

fn header(w: &mut impl Write, meta: &[(String, String)]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// Shortest round-trip form, switching to exponent notation for very large
/// or small magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn rows<W: Write>(w: W, meta: &[(String, String)], cols: [&str; 3]) -> io::Result<csv::Writer<W>> {
    let mut w = w;
    header(&mut w, meta)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(cols)?;
    Ok(out)
}

/// Columns `n, re, im`.
pub fn write_trajectory_csv<W: Write>(w: W, traj: &Trajectory, meta: &[(String, String)]) -> io::Result<()> {
    let mut out = rows(w, meta, ["n", "re", "im"])?;
    for (n, x) in traj.values.iter().enumerate() {
        out.write_record([n.to_string(), num(x.re), num(x.im)])?;
    }
    out.flush()
}

/// Columns `theta, re, im`.
pub fn write_boundary_csv<W: Write>(w: W, curve: &BoundaryCurve, meta: &[(String, String)]) -> io::Result<()> {
    let mut out = rows(w, meta, ["theta", "re", "im"])?;
    for (t, p) in curve.thetas.iter().zip(&curve.points) {
        out.write_record([num(*t), num(p.re), num(p.im)])?;
    }
    out.flush()
}

/// Columns `re, im, winding`, one row per cell centre.
pub fn write_grid_csv<W: Write>(
    w: W,
    grid: &GridSpec,
    windings: &[i64],
    meta: &[(String, String)],
) -> io::Result<()> {
    let mut out = rows(w, meta, ["re", "im", "winding"])?;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let z = grid.cell_center(i, j);
            out.write_record([num(z.re), num(z.im), windings[j * grid.nx + i].to_string()])?;
        }
    }
    out.flush()
}

/// Reads any three-column numeric CSV written by this module.
pub fn read_triples<R: Read>(r: R) -> io::Result<Vec<[f64; 3]>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).has_headers(true).from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(io::Error::new(io::ErrorKind::InvalidData, format!("expected 3 columns, got {}", rec.len())));
        }
        let mut v = [0.0; 3];
        for (slot, field) in v.iter_mut().zip(rec.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("bad number {field:?}: {e}")))?;
        }
        out.push(v);
    }
    Ok(out)
}

/// `(n, x(n))` pairs from a trajectory CSV.
pub fn read_trajectory_csv<R: Read>(r: R) -> io::Result<Vec<(usize, Complex64)>> {
    Ok(read_triples(r)?
        .into_iter()
        .map(|[n, re, im]| (n as usize, Complex64::new(re, im)))
        .collect())
}

/// `(theta, gamma(theta))` pairs from a boundary CSV.
pub fn read_boundary_csv<R: Read>(r: R) -> io::Result<Vec<(f64, Complex64)>> {
    Ok(read_triples(r)?
        .into_iter()
        .map(|[t, re, im]| (t, Complex64::new(re, im)))
        .collect())
}

/// Optional filled cells for [`boundary_svg`].
pub struct SvgFill<'a> {
    pub grid: &'a GridSpec,
    pub windings: &'a [i64],
    pub target: i64,
}

/// Plain SVG 1.1: the locus as one path and, if given, cells whose winding
/// equals `target` as one filled path at 40% opacity.
pub fn boundary_svg(curve: &BoundaryCurve, fill: Option<SvgFill<'_>>, meta: &[(String, String)]) -> String {
    let (x0, x1, y0, y1) = match &fill {
        Some(f) => (f.grid.re_min, f.grid.re_max, f.grid.im_min, f.grid.im_max),
        None => {
            let (a, b, c, d) = curve.bounding_box();
            let (px, py) = (0.05 * (b - a), 0.05 * (d - c));
            (a - px, b + px, c - py, d + py)
        }
    };
    let size = 800.0;
    let scale = size / (x1 - x0).max(y1 - y0);
    let (w, h) = ((x1 - x0) * scale, (y1 - y0) * scale);
    let px = |z: Complex64| ((z.re - x0) * scale, (y1 - z.im) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    for (k, v) in meta {
        let _ = writeln!(s, "<!-- {k}={v} -->");
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if let Some(f) = &fill {
        let g = f.grid;
        let (cw, ch) = (g.dx() * scale, g.dy() * scale);
        let mut d = String::new();
        for j in 0..g.ny {
            let mut i = 0;
            while i < g.nx {
                if f.windings[j * g.nx + i] != f.target {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < g.nx && f.windings[j * g.nx + i] == f.target {
                    i += 1;
                }
                let left = g.re_min + start as f64 * g.dx();
                let top = g.im_min + (j + 1) as f64 * g.dy();
                let (sx, sy) = px(Complex64::new(left, top));
                let run = (i - start) as f64 * cw;
                let _ = write!(d, "M{sx:.3} {sy:.3}h{run:.3}v{ch:.3}h{:.3}z", -run);
            }
        }
        if !d.is_empty() {
            let _ = writeln!(s, r#"<path d="{d}" fill="steelblue" fill-opacity="0.4" stroke="none"/>"#);
        }
    }

    let (ax, ay) = px(Complex64::new(x0, 0.0));
    let (bx, _) = px(Complex64::new(x1, 0.0));
    let _ = writeln!(s, r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{ay:.3}" stroke="gray" stroke-width="0.5"/>"#);

    let mut d = String::new();
    for (k, p) in curve.points.iter().enumerate() {
        let (x, y) = px(*p);
        let _ = write!(d, "{}{x:.3} {y:.3}", if k == 0 { "M" } else { "L" });
    }
    let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="black" stroke-width="1"/>"#);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{sample_boundary, Family};

    #[test]
    fn boundary_round_trip() {
        let cv = sample_boundary(&Family::two_term(1.9, 0.2, 2.0).unwrap(), 1024).unwrap();
        let mut buf = Vec::new();
        write_boundary_csv(&mut buf, &cv, &[("alpha".into(), "1.9".into())]).unwrap();
        let back = read_boundary_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), cv.len());
        for ((t, p), (t2, p2)) in back.iter().zip(cv.thetas.iter().zip(&cv.points)) {
            assert_eq!(t.to_bits(), t2.to_bits());
            assert_eq!(p, p2);
        }
    }

    #[test]
    fn svg_has_single_locus_path() {
        let cv = sample_boundary(&Family::one_term(0.55, 1).unwrap(), 1024).unwrap();
        let s = boundary_svg(&cv, None, &[]);
        assert!(s.starts_with("<?xml"));
        assert_eq!(s.matches("<path").count(), 1);
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
