//! File formats for grids, curves and profiles.
//!
//! Every float is written with 17 significant digits so that a value read
//! back is bit-identical to the one written. Undefined grid values are
//! explicit `null`s in JSON and empty fields in CSV.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::boundary::{CurveLabel, ParamCurve};
use crate::error::{Error, Result};
use crate::potential::{CaseSigns, ModelParams};
use crate::profiles::ProfileSolution;
use crate::regions::{NodeClass, OmegaScale, ScalarField, Window};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON formatter that writes floats as `fmt_f64` does.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Serializes `value` as JSON with 17-digit floats.
pub fn to_json_writer<W: Write, T: Serialize + ?Sized>(w: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(w, Sig17);
    value.serialize(&mut ser)?;
    Ok(())
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    to_json_writer(&mut buf, value)?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

fn opt_field(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GridNodes {
    class: Vec<NodeClass>,
    j: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GridFile {
    case: CaseSigns,
    window: Window,
    omega_scale: OmegaScale,
    nodes: GridNodes,
}

pub fn write_grid_json<W: Write>(w: W, field: &ScalarField) -> Result<()> {
    let file = GridFile {
        case: field.case,
        window: field.window,
        omega_scale: field.window.omega_scale,
        nodes: GridNodes { class: field.class.clone(), j: field.j.clone() },
    };
    to_json_writer(w, &file)
}

pub fn read_grid_json<R: Read>(r: R) -> Result<ScalarField> {
    let file: GridFile = serde_json::from_reader(r)?;
    let mut window = file.window;
    window.omega_scale = file.omega_scale;
    window.validate()?;
    let n = window.n_omega * window.n_gamma;
    if file.nodes.class.len() != n || file.nodes.j.len() != n {
        return Err(Error::Format(format!(
            "grid has {} classes and {} values, window needs {n}",
            file.nodes.class.len(),
            file.nodes.j.len()
        )));
    }
    Ok(ScalarField { case: file.case, window, class: file.nodes.class, j: file.nodes.j })
}

/// One row per node in storage order: `omega,gamma,class,j`.
pub fn write_grid_csv<W: Write>(w: W, field: &ScalarField) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["omega", "gamma", "class", "j"]).map_err(csv_err)?;
    let omegas = field.window.omega_nodes();
    let gammas = field.window.gamma_nodes();
    for (ig, &g) in gammas.iter().enumerate() {
        for (io, &o) in omegas.iter().enumerate() {
            let k = field.index(io, ig);
            let class = match field.class[k] {
                NodeClass::Exists => "exists",
                NodeClass::Boundary => "boundary",
                NodeClass::None => "none",
            };
            out.write_record([fmt_f64(o), fmt_f64(g), class.to_string(), opt_field(field.j[k])])
                .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CurveFile {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
    points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<Vec<f64>>,
}

impl From<&ParamCurve> for CurveFile {
    fn from(c: &ParamCurve) -> Self {
        let (label, level) = match c.label {
            CurveLabel::GammaNo => ("gamma_no".to_string(), None),
            CurveLabel::GammaCr => ("gamma_cr".to_string(), None),
            CurveLabel::LevelSet(l) => ("level_set".to_string(), Some(l)),
        };
        CurveFile { label, level, points: c.points.iter().map(|&(o, g)| [o, g]).collect(), t: c.t.clone() }
    }
}

impl TryFrom<CurveFile> for ParamCurve {
    type Error = Error;

    fn try_from(f: CurveFile) -> Result<Self> {
        let label = match (f.label.as_str(), f.level) {
            ("gamma_no", _) => CurveLabel::GammaNo,
            ("gamma_cr", _) => CurveLabel::GammaCr,
            ("level_set", Some(l)) => CurveLabel::LevelSet(l),
            (other, _) => return Err(Error::Format(format!("unknown curve label {other:?}"))),
        };
        if let Some(t) = &f.t {
            if t.len() != f.points.len() {
                return Err(Error::Format("curve parameter and points differ in length".into()));
            }
        }
        Ok(ParamCurve { label, points: f.points.into_iter().map(|[o, g]| (o, g)).collect(), t: f.t })
    }
}

/// Writes a list of curves as a JSON array.
pub fn write_curves_json<W: Write>(w: W, curves: &[ParamCurve]) -> Result<()> {
    let files: Vec<CurveFile> = curves.iter().map(CurveFile::from).collect();
    to_json_writer(w, &files)
}

pub fn read_curves_json<R: Read>(r: R) -> Result<Vec<ParamCurve>> {
    let files: Vec<CurveFile> = serde_json::from_reader(r)?;
    files.into_iter().map(ParamCurve::try_from).collect()
}

/// One row per point: `curve,label,omega,gamma,t` where `curve` is the
/// index of the polyline in `curves`.
pub fn write_curves_csv<W: Write>(w: W, curves: &[ParamCurve]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["curve", "label", "omega", "gamma", "t"]).map_err(csv_err)?;
    for (k, c) in curves.iter().enumerate() {
        let name = c.label.name();
        for (i, &(o, g)) in c.points.iter().enumerate() {
            let t = c.t.as_ref().map(|t| t[i]);
            out.write_record([k.to_string(), name.clone(), fmt_f64(o), fmt_f64(g), opt_field(t)])
                .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Sidecar metadata for a profile CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub method: crate::profiles::ProfileMethod,
    pub params: ModelParams,
    pub phi0: f64,
    pub dt: f64,
    pub t_end: f64,
    pub energy_residual: f64,
    pub bc_residual: f64,
    pub status: String,
}

impl ProfileMeta {
    pub fn new(params: &ModelParams, p: &ProfileSolution, status: &str) -> Self {
        ProfileMeta {
            method: p.method,
            params: *params,
            phi0: p.phi0,
            dt: p.dt(),
            t_end: p.t_end(),
            energy_residual: p.energy_residual,
            bc_residual: p.bc_residual,
            status: status.to_string(),
        }
    }
}

/// Profile samples under the header `t,phi`.
pub fn write_profile_csv<W: Write>(w: W, p: &ProfileSolution) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "phi"]).map_err(csv_err)?;
    for (&t, &phi) in p.t.iter().zip(&p.phi) {
        out.write_record([fmt_f64(t), fmt_f64(phi)]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_profile_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "phi"] {
        return Err(Error::Format(format!("expected header t,phi, got {headers:?}")));
    }
    let (mut t, mut phi) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        t.push(parse_f64(&rec[0])?);
        phi.push(parse_f64(&rec[1])?);
    }
    Ok((t, phi))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|e| Error::Format(format!("{s:?}: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
