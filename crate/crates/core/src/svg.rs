//! Schematic SVG of an open book page.
//!
//! The page is drawn as a disk with its punctures on a ring; each Dehn twist
//! is one closed curve around the punctures it encloses, and the knot is a
//! dashed curve. Output depends only on the inputs, so identical calls give
//! identical bytes.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::kirby::{Component, MoveTrace, Step};
use crate::openbook::OpenBook;

const SIZE: f64 = 520.0;
const CENTER: f64 = 260.0;
const DISK: f64 = 230.0;
const RING: f64 = 140.0;
const HOLE: f64 = 11.0;

fn positions(punctures: &[Component]) -> Vec<(f64, f64)> {
    let m = punctures.len();
    (0..m)
        .map(|k| {
            if m == 1 {
                return (CENTER, CENTER);
            }
            let a = 2.0 * PI * k as f64 / m as f64 - PI / 2.0;
            (CENTER + RING * a.cos(), CENTER + RING * a.sin())
        })
        .collect()
}

/// Circle around a set of points, grown by `pad`. An empty set gets a small
/// loop near the rim.
fn enclosing(points: &[(f64, f64)], pad: f64, slot: usize) -> (f64, f64, f64) {
    if points.is_empty() {
        let a = PI / 4.0 + 0.35 * slot as f64;
        let r = DISK - 28.0;
        return (CENTER + r * a.cos(), CENTER + r * a.sin(), 12.0);
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.1).sum::<f64>() / n;
    let r = points
        .iter()
        .map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt())
        .fold(0.0, f64::max);
    (cx, cy, r + HOLE + pad)
}

fn closed_circle(cx: f64, cy: f64, r: f64) -> String {
    format!(
        "M {:.2} {:.2} A {r:.2} {r:.2} 0 1 0 {:.2} {:.2} A {r:.2} {r:.2} 0 1 0 {:.2} {:.2} Z",
        cx - r,
        cy,
        cx + r,
        cy,
        cx - r,
        cy
    )
}

pub fn render_svg(book: &OpenBook, stages: &MoveTrace) -> String {
    let pos = positions(&book.page.punctures);
    let at = |c: &Component| book.page.punctures.iter().position(|p| p == c).map(|k| pos[k]);
    let legend_lines = 3 + Step::ALL.len();
    let height = SIZE + 18.0 * legend_lines as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{height}" viewBox="0 0 {SIZE} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<circle class="page" cx="{CENTER}" cy="{CENTER}" r="{DISK}" fill="#f4f4f4" stroke="black" stroke-width="2"/>"##
    );

    for (k, twist) in book.monodromy.iter().enumerate() {
        let pts: Vec<_> = twist.curve.iter().filter_map(at).collect();
        let (cx, cy, r) = enclosing(&pts, 6.0 + 5.0 * k as f64, k);
        let _ = writeln!(
            s,
            r##"<path class="twist" data-source="{}" data-sign="{:+}" d="{}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>"##,
            twist.source,
            twist.sign,
            closed_circle(cx, cy, r)
        );
    }

    let knot_pts: Vec<_> = book.knot.iter().filter_map(at).collect();
    let (kx, ky, kr) = if knot_pts.is_empty() {
        (CENTER, CENTER, DISK - 10.0)
    } else {
        enclosing(&knot_pts, 4.0, 0)
    };
    let _ = writeln!(
        s,
        r##"<path class="knot" d="{}" fill="none" stroke="#c0392b" stroke-width="2.5" stroke-dasharray="8 4"/>"##,
        closed_circle(kx, ky, kr)
    );

    for (c, (x, y)) in book.page.punctures.iter().zip(&pos) {
        let _ = writeln!(
            s,
            r#"<circle class="puncture" cx="{x:.2}" cy="{y:.2}" r="{HOLE}" fill="white" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" text-anchor="middle">{c}</text>"#,
            x,
            y + 3.5
        );
    }

    let mut y = SIZE + 6.0;
    let mut line = |s: &mut String, text: String| {
        let _ = writeln!(s, r#"<text x="12" y="{y:.0}" font-family="monospace" font-size="12">{text}</text>"#);
        y += 18.0;
    };
    let manifold = if book.p == 0 { "S1xS2".to_string() } else { format!("L({},1)", book.p) };
    line(&mut s, format!("{manifold}: disk with {} punctures", book.page.punctures.len()));
    line(&mut s, format!("{} positive Dehn twists", book.monodromy.len()));
    line(&mut s, format!("{} moves", stages.len()));
    for step in Step::ALL {
        line(&mut s, format!("  {step}: {}", stages.count(step)));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_word, PlatInput};
    use crate::openbook::extract;
    use crate::pipeline::run;

    fn rendered(word: &str, p: u32) -> (OpenBook, String) {
        let r = run(&PlatInput::new(parse_word(word).unwrap(), p)).unwrap();
        let b = extract(&r.endpoint, &r.trace).unwrap();
        let svg = render_svg(&b, &r.trace);
        (b, svg)
    }

    #[test]
    fn one_curve_per_twist() {
        for (w, p) in [("n=1", 1), ("n=2 a(1,2) a(2,4)^-2", 5), ("n=3 a(1,6)", 0)] {
            let (b, svg) = rendered(w, p);
            assert_eq!(svg.matches(r#"class="twist""#).count(), b.monodromy.len());
            assert_eq!(svg.matches(r#"class="puncture""#).count(), b.punctures());
            assert_eq!(svg.matches(r#"class="knot""#).count(), 1);
        }
    }

    #[test]
    fn no_twists_only_punctures() {
        let mut b = rendered("n=1", 1).0;
        b.monodromy.clear();
        let svg = render_svg(&b, &MoveTrace::new());
        assert!(!svg.contains("class=\"twist\""));
        assert!(svg.contains("class=\"page\""));
    }

    #[test]
    fn deterministic() {
        assert_eq!(rendered("n=2 a(1,3)^-1", 6).1, rendered("n=2 a(1,3)^-1", 6).1);
    }
}
