//! File formats: scattering data JSON, potential and profile CSV, the
//! conserved-quantity log. All writers go through a temp file and rename.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::evolve::ConservedRecord;
use crate::scattering::{DiscreteEigenpair, GenericityReport, PotentialSample, ScatteringData, ZGrid};
use crate::{Complex64 as C, Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDto {
    zmin: f64,
    zmax: f64,
    n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolitonDto {
    zeta: f64,
    c_re: f64,
    c_im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BreatherDto {
    xi: f64,
    eta: f64,
    c_re: f64,
    c_im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenericityDto {
    passed: bool,
    violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataFile {
    grid: GridDto,
    r: Vec<[f64; 2]>,
    solitons: Vec<SolitonDto>,
    breathers: Vec<BreatherDto>,
    t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genericity: Option<GenericityDto>,
}

impl DataFile {
    fn from_data(d: &ScatteringData, report: Option<&GenericityReport>) -> Self {
        DataFile {
            grid: GridDto { zmin: d.grid.zmin, zmax: d.grid.zmax, n: d.grid.n },
            r: d.r.iter().map(|v| [v.re, v.im]).collect(),
            solitons: d.solitons.iter().map(|p| SolitonDto { zeta: p.z.im, c_re: p.c.re, c_im: p.c.im }).collect(),
            breathers: d
                .breathers
                .iter()
                .map(|p| BreatherDto { xi: p.z.re, eta: p.z.im, c_re: p.c.re, c_im: p.c.im })
                .collect(),
            t: d.t,
            genericity: report.map(|g| GenericityDto { passed: g.passed(), violations: g.violations.clone() }),
        }
    }

    fn into_data(self) -> Result<ScatteringData> {
        let grid = ZGrid { zmin: self.grid.zmin, zmax: self.grid.zmax, n: self.grid.n };
        grid.validate()?;
        if self.r.len() != grid.n {
            return Err(Error::Parse(format!("r has {} samples, grid declares {}", self.r.len(), grid.n)));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !self.t.is_finite() || !self.r.iter().all(|v| finite(v)) {
            return Err(Error::Parse("non-finite number in scattering data".into()));
        }
        let mut solitons = Vec::with_capacity(self.solitons.len());
        for s in self.solitons {
            if !(s.zeta > 0.0) || !finite(&[s.c_re, s.c_im]) {
                return Err(Error::Parse(format!("bad soliton entry zeta = {}", s.zeta)));
            }
            solitons.push(DiscreteEigenpair::soliton(s.zeta, C::new(s.c_re, s.c_im)));
        }
        let mut breathers = Vec::with_capacity(self.breathers.len());
        for b in self.breathers {
            if !(b.xi > 0.0 && b.eta > 0.0) || !finite(&[b.c_re, b.c_im]) {
                return Err(Error::Parse(format!("bad breather entry ({}, {})", b.xi, b.eta)));
            }
            breathers.push(DiscreteEigenpair::breather(b.xi, b.eta, C::new(b.c_re, b.c_im)));
        }
        let mut d = ScatteringData {
            grid,
            r: self.r.into_iter().map(|[a, b]| C::new(a, b)).collect(),
            solitons,
            breathers,
            t: self.t,
        };
        d.sort();
        Ok(d)
    }
}

/// Writes every float with 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    v.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn data_to_json(d: &ScatteringData) -> Result<String> {
    to_json(&DataFile::from_data(d, None))
}

/// Same schema plus a `genericity` block, as written by the scatter command.
pub fn data_to_json_with_report(d: &ScatteringData, report: &GenericityReport) -> Result<String> {
    to_json(&DataFile::from_data(d, Some(report)))
}

pub fn data_from_json(s: &str) -> Result<ScatteringData> {
    let f: DataFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    f.into_data()
}

pub fn read_data(path: &Path) -> Result<ScatteringData> {
    data_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_data(path: &Path, d: &ScatteringData) -> Result<()> {
    write_atomic(path, data_to_json(d)?.as_bytes())
}

/// Writes to a temp file in the target directory, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn parse_xy(text: &str, header: [&str; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let h = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if h.len() != 2 || h.get(0) != Some(header[0]) || h.get(1) != Some(header[1]) {
        return Err(Error::Parse(format!("expected header \"{},{}\"", header[0], header[1])));
    }
    let (mut xs, mut us) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("row {}: column {k} is not a finite number", i + 2)))
        };
        xs.push(num(0)?);
        us.push(num(1)?);
    }
    Ok((xs, us))
}

/// Potential CSV with header `x,u` on a uniform grid.
pub fn potential_from_csv(text: &str) -> Result<PotentialSample> {
    let (x, u) = parse_xy(text, ["x", "u"])?;
    PotentialSample::new(&x, u).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_potential(path: &Path) -> Result<PotentialSample> {
    potential_from_csv(&std::fs::read_to_string(path)?)
}

/// Profile CSV (`x,u`) as text.
pub fn profile_csv(x: &[f64], u: &[f64]) -> String {
    let mut s = String::with_capacity(48 * x.len() + 4);
    s.push_str("x,u\n");
    for (a, b) in x.iter().zip(u) {
        s.push_str(&format!("{a:.16e},{b:.16e}\n"));
    }
    s
}

pub fn profile_from_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    parse_xy(text, ["x", "u"])
}

pub fn write_profile(path: &Path, x: &[f64], u: &[f64]) -> Result<()> {
    write_atomic(path, profile_csv(x, u).as_bytes())
}

pub fn conserved_csv(log: &[ConservedRecord]) -> String {
    let mut s = String::from("t,mass,momentum\n");
    for r in log {
        s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r.t, r.mass, r.momentum));
    }
    s
}

pub fn write_conserved(path: &Path, log: &[ConservedRecord]) -> Result<()> {
    write_atomic(path, conserved_csv(log).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScatteringData {
        let mut d = ScatteringData::reflectionless(
            vec![DiscreteEigenpair::soliton(0.7, C::new(0.0, 1.0 / 3.0))],
            vec![DiscreteEigenpair::breather(1.0, 0.5, C::new(0.1, -2.0e-7))],
        );
        d.grid = ZGrid::symmetric(2.0, 9);
        d.r = d.grid.nodes().iter().map(|&z| C::new(z.sin() / 7.0, 0.3 * z * z)).collect();
        d.t = 1.0 / 3.0;
        d
    }

    #[test]
    fn json_round_trip_is_exact() {
        let d = sample();
        let s = data_to_json(&d).unwrap();
        assert_eq!(data_from_json(&s).unwrap(), d);
        assert!(s.contains("3.3333333333333331e-1"));
        let g = data_to_json_with_report(&d, &GenericityReport { violations: vec!["x".into()] }).unwrap();
        assert_eq!(data_from_json(&g).unwrap(), d);
    }

    #[test]
    fn json_rejects_bad_input() {
        let s = data_to_json(&sample()).unwrap();
        assert!(data_from_json(&s.replace("\"t\"", "\"time\"")).is_err());
        assert!(data_from_json(&s.replacen("\"n\":9", "\"n\":8", 1)).is_err());
        assert!(matches!(data_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn potential_csv() {
        let mut text = String::from("x,u\n");
        for i in 0..16 {
            text.push_str(&format!("{},{}\n", i as f64 * 0.5, (i as f64).cos()));
        }
        let p = potential_from_csv(&text).unwrap();
        assert_eq!(p.len(), 16);
        assert_eq!(p.spacing(), 0.5);
        assert!(potential_from_csv("a,b\n1,2\n").is_err());
        assert!(potential_from_csv(&text.replace("0.5,", "0.5x,")).is_err());
    }

    #[test]
    fn profile_csv_round_trip() {
        let x = [0.1, 0.2, -1e-300];
        let u = [1.0 / 3.0, -2.5, 0.0];
        let (a, b) = profile_from_csv(&profile_csv(&x, &u)).unwrap();
        assert_eq!(a, x);
        assert_eq!(b, u);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.json");
        write_data(&p, &sample()).unwrap();
        write_data(&p, &sample()).unwrap();
        assert_eq!(read_data(&p).unwrap(), sample());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
