//! SVG and TikZ charts of one page: `s` runs right, `t` runs up.

use std::fmt::Write as _;

use sseqbench_core::specseq::{Bidegree, Page};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartArrow {
    pub r: u32,
    pub source: Bidegree,
    pub target: Bidegree,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    pub page: u32,
    /// Largest `s` and `t` drawn.
    pub max_s: u32,
    pub max_t: u32,
    pub dots: Vec<(Bidegree, usize)>,
    pub arrows: Vec<ChartArrow>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct BadArrow(pub ChartArrow);

impl ChartSpec {
    /// Nonzero groups of `page` in its window and its nonzero differentials.
    /// `label_page` is the page number shown, which differs from `page.r()`
    /// when the requested page lies past `E_∞`.
    pub fn from_page(page: &Page, label_page: u32) -> Self {
        let n = page.degree_bound();
        let dots: Vec<(Bidegree, usize)> = page.dims().into_iter().collect();
        let arrows = page
            .nonzero_arrows()
            .into_iter()
            .filter(|(a, _)| a.source.total() <= n && a.target.total() <= n)
            .map(|(a, rank)| ChartArrow { r: a.r, source: a.source, target: a.target, rank })
            .collect();
        ChartSpec { page: label_page, max_s: n, max_t: n, dots, arrows }
    }

    /// Every arrow must have bidegree `(r, 1 - r)`.
    pub fn check(&self) -> Result<(), BadArrow> {
        for a in &self.arrows {
            if a.source.d_target(a.r) != Some(a.target) {
                return Err(BadArrow(*a));
            }
        }
        Ok(())
    }

    pub fn render(&self, format: ChartFormat) -> String {
        match format {
            ChartFormat::Svg => self.svg(),
            ChartFormat::Tikz => self.tikz(),
        }
    }

    pub fn svg(&self) -> String {
        const CELL: u32 = 40;
        const MARGIN: u32 = 40;
        let cols = self.max_s + 1;
        let rows = self.max_t + 1;
        let width = 2 * MARGIN + cols * CELL;
        let height = 2 * MARGIN + rows * CELL;
        let x = |s: u32| MARGIN + s * CELL + CELL / 2;
        let y = |t: u32| MARGIN + (self.max_t - t) * CELL + CELL / 2;

        let mut out = String::new();
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#).unwrap();
        out.push_str("<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#b00\"/></marker></defs>\n");
        writeln!(out, r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="14">E_{}</text>"#, MARGIN / 2, self.page).unwrap();
        for s in 0..=cols {
            let gx = MARGIN + s * CELL;
            writeln!(out, r##"<line x1="{gx}" y1="{MARGIN}" x2="{gx}" y2="{}" stroke="#ddd"/>"##, MARGIN + rows * CELL).unwrap();
        }
        for t in 0..=rows {
            let gy = MARGIN + t * CELL;
            writeln!(out, r##"<line x1="{MARGIN}" y1="{gy}" x2="{}" y2="{gy}" stroke="#ddd"/>"##, MARGIN + cols * CELL).unwrap();
        }
        for s in 0..cols {
            writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{s}</text>"#, x(s), MARGIN + rows * CELL + 14).unwrap();
        }
        for t in 0..rows {
            writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{t}</text>"#, MARGIN - 6, y(t) + 4).unwrap();
        }
        for a in &self.arrows {
            writeln!(
                out,
                r##"<line class="d{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#b00" stroke-width="2" marker-end="url(#head)"/>"##,
                a.r,
                x(a.source.s),
                y(a.source.t),
                x(a.target.s),
                y(a.target.t)
            )
            .unwrap();
        }
        for (b, d) in &self.dots {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, x(b.s), y(b.t), dot_radius(*d)).unwrap();
            if *d > 1 {
                writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="9" fill="white" text-anchor="middle">{d}</text>"#, x(b.s), y(b.t) + 3).unwrap();
            }
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn tikz(&self) -> String {
        let mut out = String::new();
        writeln!(out, "% E_{} page", self.page).unwrap();
        out.push_str("\\begin{tikzpicture}[scale=0.6]\n");
        writeln!(out, "  \\draw[very thin, gray!40] (-0.5,-0.5) grid ({}.5,{}.5);", self.max_s, self.max_t).unwrap();
        for s in 0..=self.max_s {
            writeln!(out, "  \\node[below] at ({s},-0.5) {{\\tiny {s}}};").unwrap();
        }
        for t in 0..=self.max_t {
            writeln!(out, "  \\node[left] at (-0.5,{t}) {{\\tiny {t}}};").unwrap();
        }
        for (b, d) in &self.dots {
            let r = dot_radius(*d);
            writeln!(out, "  \\fill ({},{}) circle (0.{:02});", b.s, b.t, r * 2).unwrap();
            if *d > 1 {
                writeln!(out, "  \\node[above right] at ({},{}) {{\\tiny {d}}};", b.s, b.t).unwrap();
            }
        }
        for a in &self.arrows {
            writeln!(
                out,
                "  \\draw[->, red, thick] ({},{}) -- ({},{}) node[midway, above] {{\\tiny $d_{{{}}}$}};",
                a.source.s, a.source.t, a.target.s, a.target.t, a.r
            )
            .unwrap();
        }
        out.push_str("\\end{tikzpicture}\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ChartFormat {
    Svg,
    Tikz,
}

impl ChartFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ChartFormat::Svg => "svg",
            ChartFormat::Tikz => "tex",
        }
    }
}

fn dot_radius(dim: usize) -> u32 {
    (3 + 2 * dim as u32).min(15)
}
