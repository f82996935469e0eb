//! Flat `key = value [unit]` scenario files.
//!
//! Absent keys take the reference values of [`Scenario::default`]. Listing
//! any `pu.N`/`beam.N` key replaces the default beams, and listing any
//! `su.N` key replaces the default users. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use wcss_core::radiation::{db_to_linear, wavelength};
use wcss_core::scenario::ARRAY_HEIGHT;
use wcss_core::{
    ArrayGeometry, ArrayPose, Beam, BeamSpec, ElementPattern, FadingConfig, FadingModel, Point3, RadioParams, Scenario,
    Trajectory, WeightSource,
};

/// Where a bad entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override(usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override(n) => write!(f, "override {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: {key}: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub key: String,
    pub message: String,
}

#[derive(Debug, Clone)]
struct Entry {
    origin: Origin,
    key: String,
    value: String,
    unit: Option<String>,
}

impl Entry {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError { origin: self.origin, key: self.key.clone(), message: message.into() })
    }

    fn units(&self, allowed: &[&str]) -> Result<Option<&str>, ConfigError> {
        match self.unit.as_deref() {
            None => Ok(None),
            Some(u) if allowed.contains(&u) => Ok(Some(u)),
            Some(u) => self.err(format!("unit [{u}] not accepted here (allowed: {})", allowed.join(", "))),
        }
    }

    fn float(&self, s: &str) -> Result<f64, ConfigError> {
        match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.err(format!("expected a finite number, got {:?}", s.trim())),
        }
    }

    fn number(&self) -> Result<f64, ConfigError> {
        self.units(&[])?;
        self.float(&self.value)
    }

    fn integer(&self) -> Result<u64, ConfigError> {
        self.units(&[])?;
        self.value.trim().parse().or_else(|_| self.err(format!("expected a nonnegative integer, got {:?}", self.value)))
    }

    fn list(&self, s: &str) -> Result<Vec<f64>, ConfigError> {
        s.split(',').map(|p| self.float(p)).collect()
    }

    fn point(&self, s: &str) -> Result<Point3, ConfigError> {
        match self.list(s)?[..] {
            [x, y, z] => Ok(Point3::new(x, y, z)),
            _ => self.err(format!("expected three coordinates x, y, z, got {:?}", s.trim())),
        }
    }

    fn metres(&self) -> Result<Point3, ConfigError> {
        self.units(&["m"])?;
        self.point(&self.value)
    }

    fn power(&self) -> Result<f64, ConfigError> {
        let v = self.float(&self.value)?;
        let w = match self.units(&["W", "mW", "dBm"])? {
            None | Some("W") => v,
            Some("mW") => v * 1e-3,
            _ => db_to_linear(v) * 1e-3,
        };
        if w > 0.0 {
            Ok(w)
        } else {
            self.err("power must be positive")
        }
    }

    fn ratio(&self) -> Result<f64, ConfigError> {
        let v = self.float(&self.value)?;
        Ok(match self.units(&["dB"])? {
            Some(_) => db_to_linear(v),
            None => v,
        })
    }

    fn frequency(&self) -> Result<f64, ConfigError> {
        let v = self.float(&self.value)?;
        let scale = match self.units(&["Hz", "kHz", "MHz", "GHz"])? {
            None | Some("Hz") => 1.0,
            Some("kHz") => 1e3,
            Some("MHz") => 1e6,
            _ => 1e9,
        };
        Ok(v * scale)
    }

    fn positive(&self, v: f64) -> Result<f64, ConfigError> {
        if v > 0.0 {
            Ok(v)
        } else {
            self.err(format!("must be positive, got {v}"))
        }
    }
}

fn split_line(raw: &str) -> Option<Result<(String, String, Option<String>), String>> {
    let line = raw.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    let Some((k, rest)) = line.split_once('=') else {
        return Some(Err(format!("expected `key = value`, got {line:?}")));
    };
    let key = k.trim().to_string();
    let rest = rest.trim();
    let (value, unit) = match rest.strip_suffix(']').and_then(|r| r.rsplit_once('[')) {
        Some((v, u)) => (v.trim().to_string(), Some(u.trim().to_string())),
        None => (rest.to_string(), None),
    };
    if key.is_empty() || value.is_empty() {
        return Some(Err(format!("expected `key = value`, got {line:?}")));
    }
    Some(Ok((key, value, unit)))
}

fn read_entries(text: &str, overrides: &[String]) -> Result<BTreeMap<String, Entry>, ConfigError> {
    let mut map: BTreeMap<String, Entry> = BTreeMap::new();
    let lines = text.lines().enumerate().map(|(i, l)| (Origin::Line(i + 1), l));
    let extra = overrides.iter().enumerate().map(|(i, l)| (Origin::Override(i + 1), l.as_str()));
    for (origin, raw) in lines.chain(extra) {
        let (key, value, unit) = match split_line(raw) {
            None => continue,
            Some(Ok(t)) => t,
            Some(Err(message)) => return Err(ConfigError { origin, key: String::new(), message }),
        };
        if let (Origin::Line(_), Some(prev)) = (origin, map.get(&key)) {
            return Err(ConfigError { origin, key, message: format!("duplicate key, first set on {}", prev.origin) });
        }
        map.insert(key.clone(), Entry { origin, key, value, unit });
    }
    Ok(map)
}

/// `prefix.N` or `prefix.N.field` → `(N, field)`.
fn indexed<'a>(key: &'a str, prefix: &str) -> Option<(usize, Option<&'a str>)> {
    let rest = key.strip_prefix(prefix)?.strip_prefix('.')?;
    let (n, field) = match rest.split_once('.') {
        Some((n, f)) => (n, Some(f)),
        None => (rest, None),
    };
    let n: usize = n.parse().ok().filter(|n| *n >= 1)?;
    Some((n, field))
}

/// Parse a scenario file.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    parse_with_overrides(text, &[])
}

/// Parse a scenario file, then apply `key = value [unit]` overrides that
/// replace any earlier value of the same key.
pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<Scenario, ConfigError> {
    let entries = read_entries(text, overrides)?;
    let mut base = Scenario::default();
    let get = |k: &str| entries.get(k);

    // radio first: the default element spacing follows the carrier
    let mut radio = RadioParams::default();
    if let Some(e) = get("radio.p") {
        radio.p = e.power()?;
    }
    if let Some(e) = get("radio.G") {
        radio.gain = e.positive(e.ratio()?)?;
    }
    if let Some(e) = get("radio.fc") {
        radio.fc = e.positive(e.frequency()?)?;
    }
    if let Some(e) = get("radio.sigma_s2") {
        radio.sigma_s2 = e.positive(e.number()?)?;
    }
    if let Some(e) = get("radio.noise") {
        radio.sigma_n2 = e.power()?;
    }
    if let Some(e) = get("radio.K") {
        let k = e.integer()?;
        if k == 0 {
            return e.err("samples per window K must be at least 1");
        }
        radio.k = k as usize;
    }
    base.radio = radio;

    if let Some(e) = get("seed") {
        base.seed = e.integer()?;
    }

    let origin = match get("array.origin") {
        Some(e) => e.metres()?,
        None => Point3::new(0.0, 0.0, ARRAY_HEIGHT),
    };
    let pointing = match get("array.boresight") {
        Some(e) => {
            e.units(&[])?;
            e.point(&e.value)?
        }
        None => Point3::new(0.0, 0.0, -1.0),
    };
    base.pose = ArrayPose::new(origin, pointing).or_else(|err| {
        let e = get("array.boresight").or(get("array.origin")).expect("pose keys were given");
        e.err(err.to_string())
    })?;
    if let Some(e) = get("array.element") {
        base.element = match ElementPattern::from_name(e.value.trim()) {
            Some(p) => p,
            None => return e.err(format!("unknown element pattern {:?} (isotropic, cosine)", e.value)),
        };
    }
    base.geometry = geometry(&entries, base.radio.fc)?;

    let beams = beams(&entries)?;
    if !beams.is_empty() {
        base.beams = beams;
    }
    let sus = users(&entries)?;
    if !sus.is_empty() {
        base.sus = sus;
    }
    base.fading = fading(&entries)?;

    for (key, e) in &entries {
        let known = matches!(
            key.as_str(),
            "seed"
                | "radio.p"
                | "radio.G"
                | "radio.fc"
                | "radio.sigma_s2"
                | "radio.noise"
                | "radio.K"
                | "array.origin"
                | "array.boresight"
                | "array.element"
                | "array.L"
                | "array.Lx"
                | "array.Ly"
                | "array.dx"
                | "array.dy"
                | "array.excitation"
                | "fading.model"
                | "fading.K"
                | "fading.weights"
        ) || matches!(indexed(key, "pu"), Some((_, None | Some("amplitude"))))
            || matches!(indexed(key, "beam"), Some((_, None | Some("amplitude"))))
            || matches!(indexed(key, "su"), Some((_, None | Some("speed"))));
        if !known {
            return e.err("unknown key");
        }
    }
    Ok(base)
}

fn geometry(entries: &BTreeMap<String, Entry>, fc: f64) -> Result<ArrayGeometry, ConfigError> {
    let get = |k: &str| entries.get(k);
    let (lx, ly) = match (get("array.L"), get("array.Lx"), get("array.Ly")) {
        (Some(l), None, None) => {
            let n = l.integer()? as usize;
            wcss_core::radiation::square_factorization(n).or_else(|err| l.err(err.to_string()))?
        }
        (Some(l), _, _) => return l.err("give either array.L or array.Lx/array.Ly, not both"),
        (None, x, y) => {
            let (dx, dy) = (Scenario::default().geometry.lx(), Scenario::default().geometry.ly());
            let lx = x.map(|e| e.integer()).transpose()?.map_or(dx, |v| v as usize);
            let ly = y.map(|e| e.integer()).transpose()?.map_or(dy, |v| v as usize);
            (lx, ly)
        }
    };
    let half = wavelength(fc) / 2.0;
    let spacing = |k: &str| -> Result<f64, ConfigError> {
        match get(k) {
            Some(e) => {
                e.units(&["m"])?;
                e.positive(e.float(&e.value)?)
            }
            None => Ok(half),
        }
    };
    let (dx, dy) = (spacing("array.dx")?, spacing("array.dy")?);
    let excitation = match get("array.excitation") {
        Some(e) => {
            e.units(&[])?;
            e.list(&e.value)?
        }
        None => vec![1.0; (lx / 2) * (ly / 2)],
    };
    ArrayGeometry::new(lx, ly, dx, dy, excitation).or_else(|err| {
        let e = ["array.excitation", "array.L", "array.Lx", "array.Ly", "array.dx", "array.dy"]
            .iter()
            .find_map(|k| get(k))
            .expect("only configured geometry can be invalid");
        e.err(err.to_string())
    })
}

fn beams(entries: &BTreeMap<String, Entry>) -> Result<Vec<BeamSpec>, ConfigError> {
    let mut out: BTreeMap<usize, BeamSpec> = BTreeMap::new();
    for (key, e) in entries {
        let spec = match (indexed(key, "pu"), indexed(key, "beam")) {
            (Some((n, None)), _) => (n, BeamSpec::Toward { target: e.metres()?, amplitude: 1.0 }),
            (_, Some((n, None))) => {
                e.units(&[])?;
                match e.list(&e.value)?[..] {
                    [theta, phi] => (n, BeamSpec::Direction(Beam { theta, phi, amplitude: 1.0 })),
                    _ => return e.err("expected theta, phi in radians"),
                }
            }
            _ => continue,
        };
        if out.insert(spec.0, spec.1).is_some() {
            return e.err(format!("index {} is used by both a pu and a beam", spec.0));
        }
    }
    for (key, e) in entries {
        let (n, kind) = match (indexed(key, "pu"), indexed(key, "beam")) {
            (Some((n, Some("amplitude"))), _) => (n, "pu"),
            (_, Some((n, Some("amplitude")))) => (n, "beam"),
            _ => continue,
        };
        let a = e.positive(e.number()?)?;
        match out.get_mut(&n) {
            Some(BeamSpec::Toward { amplitude, .. }) if kind == "pu" => *amplitude = a,
            Some(BeamSpec::Direction(b)) if kind == "beam" => b.amplitude = a,
            _ => return e.err(format!("no {kind}.{n} to attach an amplitude to")),
        }
    }
    Ok(out.into_values().collect())
}

fn users(entries: &BTreeMap<String, Entry>) -> Result<Vec<Trajectory>, ConfigError> {
    let mut out = Vec::new();
    let mut n = 1;
    let mut seen = 0;
    while let Some(e) = entries.get(&format!("su.{n}")) {
        e.units(&["m"])?;
        let pts = e.value.split(';').map(|p| e.point(p)).collect::<Result<Vec<_>, _>>()?;
        let speed = match entries.get(&format!("su.{n}.speed")) {
            Some(s) => {
                s.units(&["m/s"])?;
                s.float(&s.value)?
            }
            None => 0.0,
        };
        out.push(Trajectory::new(pts, speed).or_else(|err| e.err(err.to_string()))?);
        seen += 1;
        n += 1;
    }
    // every su key must belong to the contiguous run 1..=seen
    for (key, e) in entries {
        if let Some((i, _)) = indexed(key, "su") {
            if i > seen {
                return e.err(format!("users must be numbered 1..M without gaps; su.{} is missing", seen + 1));
            }
        }
    }
    Ok(out)
}

fn fading(entries: &BTreeMap<String, Entry>) -> Result<FadingConfig, ConfigError> {
    let mut f = FadingConfig::default();
    if let Some(e) = entries.get("fading.model") {
        f.model = match e.value.trim() {
            "deterministic" => FadingModel::Deterministic,
            "rician" => FadingModel::Rician,
            other => return e.err(format!("unknown fading model {other:?} (deterministic, rician)")),
        };
    }
    if let Some(e) = entries.get("fading.K") {
        let k = e.ratio()?;
        if !(k >= 0.0) {
            return e.err("Rician K-factor must be nonnegative");
        }
        f.rician_k = k;
    }
    if let Some(e) = entries.get("fading.weights") {
        f.weight_source = match e.value.trim() {
            "realized" => WeightSource::Realized,
            "deterministic" => WeightSource::Deterministic,
            other => return e.err(format!("unknown weight source {other:?} (realized, deterministic)")),
        };
    }
    Ok(f)
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn coords(p: Point3) -> String {
    format!("{}, {}, {}", num(p.x), num(p.y), num(p.z))
}

/// Write every field of `s` so that [`parse_config`] restores it exactly.
pub fn emit_config(s: &Scenario) -> String {
    let mut out = Vec::new();
    out.push(format!("seed = {}", s.seed));
    out.push(format!("array.origin = {} [m]", coords(s.pose.origin())));
    out.push(format!("array.boresight = {}", coords(s.pose.pointing())));
    out.push(format!("array.element = {}", s.element.name()));
    let g = &s.geometry;
    out.push(format!("array.Lx = {}", g.lx()));
    out.push(format!("array.Ly = {}", g.ly()));
    out.push(format!("array.dx = {} [m]", num(g.dx())));
    out.push(format!("array.dy = {} [m]", num(g.dy())));
    out.push(format!("array.excitation = {}", g.excitation().iter().map(|v| num(*v)).collect::<Vec<_>>().join(", ")));
    for (i, b) in s.beams.iter().enumerate() {
        let n = i + 1;
        match b {
            BeamSpec::Toward { target, amplitude } => {
                out.push(format!("pu.{n} = {} [m]", coords(*target)));
                out.push(format!("pu.{n}.amplitude = {}", num(*amplitude)));
            }
            BeamSpec::Direction(beam) => {
                out.push(format!("beam.{n} = {}, {}", num(beam.theta), num(beam.phi)));
                out.push(format!("beam.{n}.amplitude = {}", num(beam.amplitude)));
            }
        }
    }
    let r = &s.radio;
    out.push(format!("radio.p = {} [W]", num(r.p)));
    out.push(format!("radio.G = {}", num(r.gain)));
    out.push(format!("radio.fc = {} [Hz]", num(r.fc)));
    out.push(format!("radio.sigma_s2 = {}", num(r.sigma_s2)));
    out.push(format!("radio.noise = {} [W]", num(r.sigma_n2)));
    out.push(format!("radio.K = {}", r.k));
    for (i, t) in s.sus.iter().enumerate() {
        let pts: Vec<String> = t.waypoints().iter().map(|p| coords(*p)).collect();
        out.push(format!("su.{} = {} [m]", i + 1, pts.join("; ")));
        out.push(format!("su.{}.speed = {} [m/s]", i + 1, num(t.speed())));
    }
    let f = &s.fading;
    out.push(format!("fading.model = {}", if f.model == FadingModel::Rician { "rician" } else { "deterministic" }));
    out.push(format!("fading.K = {}", num(f.rician_k)));
    out.push(format!(
        "fading.weights = {}",
        if f.weight_source == WeightSource::Realized { "realized" } else { "deterministic" }
    ));
    let mut text = out.join("\n");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_convert_once() {
        let s = parse_config("radio.p = 500 [mW]\nradio.fc = 2.4 [GHz]\nradio.noise = -90 [dBm]\nradio.G = 3 [dB]\n").unwrap();
        assert_eq!(s.radio.p, 0.5);
        assert_eq!(s.radio.fc, 2.4e9);
        assert!((s.radio.sigma_n2 - 1e-12).abs() < 1e-24);
        assert!((s.radio.gain - 1.995_262_314_968_879_5).abs() < 1e-15);
        assert!((s.geometry.dx() - wavelength(2.4e9) / 2.0).abs() < 1e-18);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_config("# header\n\nseed = 7 # trailing\n").unwrap();
        assert_eq!(s.seed, 7);
    }

    #[test]
    fn bad_unit_names_the_key() {
        let e = parse_config("seed = 1\nradio.fc = 5 [dBm]\n").unwrap_err();
        assert_eq!((e.origin, e.key.as_str()), (Origin::Line(2), "radio.fc"));
    }
}
