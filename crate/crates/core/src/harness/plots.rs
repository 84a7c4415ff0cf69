//! Static SVG figures: range profile, Doppler profile and a range-Doppler heatmap.
//!
//! The heatmap colour scale runs from `noise_floor − 5 dB` (dark) to 0 dB
//! (bright) and is recorded on the root element as `data-db-min` /
//! `data-db-max`. Large maps are max-pooled so that peaks survive.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::rdproc::{to_db, PeakReport, RangeDopplerMap};

const W: f64 = 720.0;
const H: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 90.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const MAX_CELLS: usize = 128;

/// dB range used by the heatmap colour scale.
pub fn heatmap_scale(noise_floor_db: f64) -> (f64, f64) {
    ((noise_floor_db - 5.0).min(-1.0), 0.0)
}

pub fn emit_plots(
    dir: &Path,
    map: &RangeDopplerMap,
    peaks: &PeakReport,
    ref_row: usize,
    ref_col: usize,
) -> Result<Vec<PathBuf>> {
    let norm = map.normalization();
    let rel = |p: f64| if norm > 0.0 { to_db(p / norm) } else { to_db(0.0) };
    let floor = heatmap_scale(peaks.noise_floor_db).0;

    let range_db: Vec<f64> = map.range_profile(ref_col).into_iter().map(rel).collect();
    let doppler_db: Vec<f64> = map.doppler_profile(ref_row).into_iter().map(rel).collect();
    let files = [
        (
            "range_profile.svg",
            line_plot(
                &format!("Range profile at {:.2} m/s", map.velocity_axis()[ref_col]),
                "range (m)",
                map.range_axis(),
                &range_db,
                floor,
            ),
        ),
        (
            "doppler_profile.svg",
            line_plot(
                &format!("Doppler profile at {:.2} m", map.range_axis()[ref_row]),
                "velocity (m/s)",
                map.velocity_axis(),
                &doppler_db,
                floor,
            ),
        ),
        ("heatmap.svg", heatmap(map, peaks.noise_floor_db)),
    ];
    let mut out = Vec::new();
    for (name, svg) in files {
        let path = dir.join(name);
        std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

fn header(s: &mut String, extra: &str) {
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12"{extra}>"#
    );
    s.push('\n');
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    while t <= hi + step * 1e-9 {
        ticks.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    ticks
}

fn axes(s: &mut String, title: &str, xlabel: &str, ylabel: &str, x: (f64, f64), y: (f64, f64)) {
    let (pw, ph) = (W - MARGIN_L - MARGIN_R, H - MARGIN_T - MARGIN_B);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, MARGIN_L + pw / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0,
        escape(ylabel)
    );
    for t in nice_ticks(x.0, x.1, 8) {
        let px = MARGIN_L + (t - x.0) / (x.1 - x.0).max(f64::MIN_POSITIVE) * pw;
        let _ = writeln!(s, r#"<line x1="{px:.1}" y1="{}" x2="{px:.1}" y2="{}" stroke="black"/>"#, MARGIN_T + ph, MARGIN_T + ph + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.1}" y="{}" text-anchor="middle">{t}</text>"#, MARGIN_T + ph + 18.0);
    }
    for t in nice_ticks(y.0, y.1, 6) {
        let py = MARGIN_T + (y.1 - t) / (y.1 - y.0).max(f64::MIN_POSITIVE) * ph;
        let _ = writeln!(s, r#"<line x1="{}" y1="{py:.1}" x2="{MARGIN_L}" y2="{py:.1}" stroke="black"/>"#, MARGIN_L - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{t}</text>"#, MARGIN_L - 8.0, py + 4.0);
    }
}

fn line_plot(title: &str, xlabel: &str, x: &[f64], y_db: &[f64], floor: f64) -> String {
    let mut s = String::new();
    header(&mut s, "");
    let x_lo = x.first().copied().unwrap_or(0.0);
    let x_hi = x.last().copied().unwrap_or(1.0).max(x_lo + f64::EPSILON);
    let y_lo = floor.floor();
    axes(&mut s, title, xlabel, "power (dB)", (x_lo, x_hi), (y_lo, 0.0));
    let (pw, ph) = (W - MARGIN_L - MARGIN_R, H - MARGIN_T - MARGIN_B);
    s.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points=""#);
    for (xv, yv) in x.iter().zip(y_db) {
        let px = MARGIN_L + (xv - x_lo) / (x_hi - x_lo) * pw;
        let py = MARGIN_T + (-yv.max(y_lo)) / (-y_lo) * ph;
        let _ = write!(s, "{px:.2},{py:.2} ");
    }
    s.push_str("\"/>\n</svg>\n");
    s
}

/// Interpolated dark-blue to yellow colour map, `t ∈ [0, 1]`.
fn colour(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |u: f64, v: f64| (u + (v - u) * f).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn heatmap(map: &RangeDopplerMap, noise_floor_db: f64) -> String {
    let (db_min, db_max) = heatmap_scale(noise_floor_db);
    let mut s = String::new();
    header(&mut s, &format!(r#" data-db-min="{db_min}" data-db-max="{db_max}""#));
    let (rows, cols) = (map.rows(), map.cols());
    let rv = map.velocity_axis();
    let v_lo = rv.first().copied().unwrap_or(0.0);
    let v_hi = v_lo + cols as f64 * map.velocity_resolution();
    let r_hi = rows as f64 * map.range_resolution();
    axes(&mut s, "Range-Doppler map (dB)", "velocity (m/s)", "range (m)", (v_lo, v_hi), (0.0, r_hi));

    let (pw, ph) = (W - MARGIN_L - MARGIN_R, H - MARGIN_T - MARGIN_B);
    let pool_r = rows.div_ceil(MAX_CELLS).max(1);
    let pool_c = cols.div_ceil(MAX_CELLS).max(1);
    let (gr, gc) = (rows.div_ceil(pool_r), cols.div_ceil(pool_c));
    let (cw, ch) = (pw / gc as f64, ph / gr as f64);
    let norm = map.normalization();
    for i in 0..gr {
        for j in 0..gc {
            let mut best = 0.0f64;
            for r in i * pool_r..((i + 1) * pool_r).min(rows) {
                for c in j * pool_c..((j + 1) * pool_c).min(cols) {
                    best = best.max(map.at(r, c));
                }
            }
            let db = if norm > 0.0 { to_db(best / norm) } else { db_min };
            let (r8, g8, b8) = colour((db - db_min) / (db_max - db_min));
            // Range grows upwards.
            let y = MARGIN_T + ph - (i + 1) as f64 * ch;
            let _ = writeln!(
                s,
                r##"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#{r8:02x}{g8:02x}{b8:02x}"/>"##,
                MARGIN_L + j as f64 * cw,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    let bar_x = W - MARGIN_R + 20.0;
    for k in 0..64 {
        let t = k as f64 / 63.0;
        let (r8, g8, b8) = colour(t);
        let y = MARGIN_T + ph * (1.0 - t) - ph / 64.0;
        let _ = writeln!(
            s,
            r##"<rect x="{bar_x}" y="{y:.2}" width="16" height="{:.2}" fill="#{r8:02x}{g8:02x}{b8:02x}"/>"##,
            ph / 64.0 + 0.05
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}">{db_max} dB</text>"#, bar_x + 20.0, MARGIN_T + 10.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">{db_min:.1} dB</text>"#, bar_x + 20.0, MARGIN_T + ph);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdproc::detect_peaks;

    fn sample_map() -> RangeDopplerMap {
        let mut power = vec![1e-4; 300 * 16];
        power[5 * 16 + 8] = 1.0;
        RangeDopplerMap::from_power(300, 16, power, 0.5, 2.0).unwrap()
    }

    #[test]
    fn three_files_with_scale_attributes() {
        let dir = tempfile::tempdir().unwrap();
        let map = sample_map();
        let rep = detect_peaks(&map, -15.0, 3).unwrap();
        let files = emit_plots(dir.path(), &map, &rep, 5, 8).unwrap();
        assert_eq!(files.len(), 3);
        let heat = std::fs::read_to_string(dir.path().join("heatmap.svg")).unwrap();
        let (lo, hi) = heatmap_scale(rep.noise_floor_db);
        assert!((lo - (rep.noise_floor_db - 5.0)).abs() < 1e-12);
        assert!(heat.contains(&format!("data-db-min=\"{lo}\"")));
        assert!(heat.contains(&format!("data-db-max=\"{hi}\"")));
        // 300 rows pool by 3 into 100 cells, 16 columns stay.
        assert_eq!(heat.matches("<rect x=").count(), 100 * 16 + 64 + 1);
        assert!(heat.contains("#fde725"), "the peak cell should be the brightest colour");
    }

    #[test]
    fn colour_endpoints() {
        assert_eq!(colour(0.0), (68, 1, 84));
        assert_eq!(colour(1.0), (253, 231, 37));
        assert_eq!(colour(7.0), colour(1.0));
    }

    #[test]
    fn ticks_cover_span() {
        let t = nice_ticks(-380.5, 380.5, 8);
        assert!(t.contains(&0.0));
        assert!(t.iter().all(|v| (-380.5..=380.5).contains(v)));
    }
}
