//! CSV and JSON-lines artifacts. Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use barrierlab_core::scattering::{AmplitudeSet, KinematicPoint};
use barrierlab_core::{Peak, Region, Snapshot, SpmPrediction};

pub const AMPLITUDE_HEADER: &str =
    "k,q,E,re_R,im_R,re_T,im_T,re_A,im_A,re_B,im_B,D,lambda_unwrapped,abs2_R,abs2_T";
pub const PREDICTION_HEADER: &str = "family,term_index,velocity,delay,emergence_x,emergence_t";
pub const SNAPSHOT_HEADER: &str = "x,re_psi,im_psi,abs2";
pub const PEAK_HEADER: &str = "region,x,height,t";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")
}

fn write_lines(path: &Path, header: &str, lines: impl IntoIterator<Item = String>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

/// `snap_t<time>_<tag>.csv` with the shortest decimal form of the time.
pub fn snapshot_file_name(t: f64, tag: &str) -> String {
    format!("snap_t{t}_{tag}.csv")
}

pub fn write_amplitudes(path: &Path, rows: &[(KinematicPoint, AmplitudeSet)]) -> io::Result<()> {
    write_lines(
        path,
        AMPLITUDE_HEADER,
        rows.iter().map(|(kp, amp)| {
            row(&[
                kp.k,
                kp.q,
                kp.energy,
                amp.r.re,
                amp.r.im,
                amp.t.re,
                amp.t.im,
                amp.a.re,
                amp.a.im,
                amp.b.re,
                amp.b.im,
                amp.d,
                amp.lambda,
                amp.reflection_probability(),
                amp.transmission_probability(),
            ])
        }),
    )
}

pub fn write_predictions(path: &Path, rows: &[SpmPrediction]) -> io::Result<()> {
    write_lines(
        path,
        PREDICTION_HEADER,
        rows.iter().map(|p| {
            let index = p.term_index.map_or_else(|| "full".to_string(), |n| n.to_string());
            format!(
                "{},{index},{}",
                p.family.label(),
                row(&[p.velocity, p.delay, p.emergence_x, p.emergence_t])
            )
        }),
    )
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> io::Result<()> {
    write_lines(
        path,
        SNAPSHOT_HEADER,
        snap.psi
            .iter()
            .zip(&snap.abs2)
            .enumerate()
            .map(|(i, (z, abs2))| row(&[snap.grid.x(i), z.re, z.im, *abs2])),
    )
}

pub fn write_peaks(path: &Path, rows: &[(Region, Peak, f64)]) -> io::Result<()> {
    write_lines(
        path,
        PEAK_HEADER,
        rows.iter()
            .map(|(region, peak, t)| format!("{},{}", region.label(), row(&[peak.x, peak.height, *t]))),
    )
}

/// One `{"t":..,"l2":..,"linf":..}` object per line.
pub fn write_comparisons(path: &Path, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for &(t, l2, linf) in rows {
        writeln!(out, "{}", serde_json::json!({ "t": t, "l2": l2, "linf": linf }))?;
    }
    out.flush()
}
