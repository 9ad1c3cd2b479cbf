//! CSV and SVG renderings of a [`SpeedGrid`].

use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;
use crate::polygrid::SpeedGrid;

/// Pixels per foot in SVG output.
const SCALE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Palette {
    /// Blue below zero, red above, white at zero; saturates at `±limit`.
    Diverging { limit: f64 },
    /// White to red from 0 to `max`.
    Sequential { max: f64 },
}

impl Palette {
    pub fn diverging_for(g: &SpeedGrid) -> Palette {
        Palette::Diverging {
            limit: g.max_abs().max(1e-9),
        }
    }

    pub fn sequential_for(g: &SpeedGrid) -> Palette {
        Palette::Sequential {
            max: g.max_abs().max(1e-9),
        }
    }

    pub fn color(&self, v: f64) -> (u8, u8, u8) {
        let ramp = |f: f64, to: (f64, f64, f64)| {
            let f = f.clamp(0.0, 1.0);
            let mix = |c: f64| (255.0 + (c - 255.0) * f).round() as u8;
            (mix(to.0), mix(to.1), mix(to.2))
        };
        const RED: (f64, f64, f64) = (178.0, 24.0, 43.0);
        const BLUE: (f64, f64, f64) = (33.0, 102.0, 172.0);
        match *self {
            Palette::Diverging { limit } if v < 0.0 => ramp(-v / limit, BLUE),
            Palette::Diverging { limit } => ramp(v / limit, RED),
            Palette::Sequential { max } => ramp(v / max, RED),
        }
    }
}

/// Matrix with one line per grid row, starting at the most negative `y`;
/// invalid and masked cells are empty fields.
pub fn write_csv<W: Write>(g: &SpeedGrid, mut w: W) -> Result<()> {
    let l = &g.layout;
    let mut line = String::new();
    for r in 0..l.n_rows {
        line.clear();
        for c in 0..l.n_cols {
            if c > 0 {
                line.push(',');
            }
            if let Some(v) = g.get(c, r) {
                write!(line, "{v:.6}").unwrap();
            }
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Parses a matrix written by [`write_csv`] back into row-major values.
pub fn read_csv_values(text: &str) -> Vec<Vec<Option<f64>>> {
    text.lines()
        .map(|line| line.split(',').map(|f| f.trim().parse().ok()).collect())
        .collect()
}

pub fn write_svg<W: Write>(g: &SpeedGrid, palette: Palette, title: &str, mut w: W) -> Result<()> {
    let l = &g.layout;
    let spec = &l.spec;
    let (wpx, hpx) = (l.n_cols as f64 * l.cell * SCALE, l.n_rows as f64 * l.cell * SCALE);
    // Frame: normalized x to the right, y upward.
    let px = |x: f64| (x - l.origin_x) * SCALE;
    let py = |y: f64| hpx - (y - l.origin_y) * SCALE;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{wpx}" height="{hpx}" viewBox="0 0 {wpx} {hpx}">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", escape(title)).unwrap();
    for i in 0..l.n_cells() {
        if !l.is_valid(i) {
            continue;
        }
        let (x0, _, _, y1) = l.cell_rect(i);
        let fill = match g.values[i] {
            Some(v) => {
                let (r, gg, b) = palette.color(v);
                format!("#{r:02x}{gg:02x}{b:02x}")
            }
            None => "#d9d9d9".to_string(),
        };
        let side = l.cell * SCALE;
        writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="{side:.1}" height="{side:.1}" fill="{fill}"/>"#,
            px(x0),
            py(y1)
        )
        .unwrap();
    }
    let r = spec.corner_radius_ft * SCALE;
    writeln!(
        s,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" rx="{r:.1}" fill="none" stroke="black" stroke-width="2"/>"#,
        px(-spec.half_length()),
        py(spec.half_width()),
        spec.length_ft * SCALE,
        spec.width_ft * SCALE
    )
    .unwrap();
    for x in [-spec.blue_line_offset_ft, spec.blue_line_offset_ft] {
        writeln!(
            s,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="#1f3d99" stroke-width="3"/>"##,
            px(x),
            py(spec.half_width()),
            py(-spec.half_width())
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    w.write_all(s.as_bytes())?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygrid::GridLayout;
    use crate::rink::RinkSpec;

    #[test]
    fn csv_matrix_shape_and_blanks() {
        let l = GridLayout::new(RinkSpec::NHL).unwrap();
        let mut g = SpeedGrid::filled(l.clone(), 12.5);
        g.values[l.index(3, 2)] = None;
        let mut buf = Vec::new();
        write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let m = read_csv_values(&text);
        assert_eq!(m.len(), 17);
        assert!(m.iter().all(|r| r.len() == 40));
        assert_eq!(m[2][3], None);
        assert_eq!(m[0][0], None);
        assert_eq!(m[8][20], Some(12.5));
        assert_eq!(m.iter().flatten().filter(|v| v.is_some()).count(), 667);
        assert!(text.lines().nth(8).unwrap().contains("12.500000"));
    }

    #[test]
    fn diverging_colors() {
        let p = Palette::Diverging { limit: 2.0 };
        assert_eq!(p.color(0.0), (255, 255, 255));
        let (r, _, b) = p.color(2.0);
        assert!(r > b);
        let (r, _, b) = p.color(-5.0);
        assert!(b > r);
        assert_eq!(p.color(-5.0), p.color(-2.0));
    }

    #[test]
    fn svg_has_one_rect_per_valid_cell() {
        let l = GridLayout::new(RinkSpec::NHL).unwrap();
        let g = SpeedGrid::filled(l, 1.0);
        let mut buf = Vec::new();
        write_svg(&g, Palette::sequential_for(&g), "A <attacking>", &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert_eq!(svg.matches("<rect").count(), 668 + 1);
        assert!(svg.contains("A &lt;attacking&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
