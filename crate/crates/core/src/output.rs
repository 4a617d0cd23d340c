//! CSV series and JSON documents with 17 significant digits per float.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::nbody::{InvariantSample, Trajectory};

/// Scientific notation with 17 significant digits; round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn csv_header(dim: usize) -> String {
    let mut cols: Vec<String> = ["t", "I", "E", "C1sum", "C2sum", "Iddot"].map(String::from).to_vec();
    cols.extend((1..=dim).map(|i| format!("P_{i}")));
    cols.extend((1..=dim * (dim - 1) / 2).map(|i| format!("L_{i}")));
    cols.push("r_min".into());
    cols.push("r_max".into());
    cols.join(",")
}

pub fn csv_row(s: &InvariantSample) -> String {
    let mut vals = vec![s.t, s.inertia, s.energy, s.c1_sum, s.c2_sum, s.iddot];
    vals.extend_from_slice(&s.momentum);
    vals.extend_from_slice(&s.angular_momentum);
    vals.push(s.r_min);
    vals.push(s.r_max);
    vals.into_iter().map(fmt_f64).collect::<Vec<_>>().join(",")
}

pub fn write_series_csv<W: Write>(traj: &Trajectory, mut w: W) -> io::Result<()> {
    writeln!(w, "{}", csv_header(traj.bodies.dim()))?;
    for s in &traj.samples {
        writeln!(w, "{}", csv_row(s))?;
    }
    w.flush()
}

/// Pretty JSON formatter that prints floats like [`fmt_f64`].
#[derive(Default)]
pub struct SigFigFormatter {
    inner: PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.inner.$name(w)
        })*
    };
}

impl Formatter for SigFigFormatter {
    delegate!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Serializes `value` as pretty JSON with 17-digit floats and a trailing newline.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
