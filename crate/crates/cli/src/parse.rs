use qdiff_core::Quaternion;

/// Sweep over one scattering parameter, `count` points from `start` to `stop` inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Energy,
    Potential,
    WAbs,
    Width,
}

impl SweepParam {
    pub fn parse(name: &str) -> Result<Self, String> {
        match name {
            "E" | "e" | "energy" => Ok(SweepParam::Energy),
            "V" | "v" | "potential" => Ok(SweepParam::Potential),
            "Wabs" | "wabs" => Ok(SweepParam::WAbs),
            "a" | "width" => Ok(SweepParam::Width),
            other => Err(format!("unknown sweep parameter '{other}' (expected E, V, Wabs or a)")),
        }
    }
}

impl SweepSpec {
    pub fn new(param: SweepParam, start: f64, stop: f64, count: usize) -> Result<Self, String> {
        if count < 2 {
            return Err(format!("sweep count must be at least 2, got {count}"));
        }
        if !(start < stop) || !start.is_finite() || !stop.is_finite() {
            return Err(format!("sweep needs finite start < stop, got {start} and {stop}"));
        }
        Ok(SweepSpec { param, start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.stop } else { self.start + span * k as f64 / (self.count - 1) as f64 })
            .collect()
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split([',', ' ']).filter(|t| !t.is_empty())
}

pub fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    let parts = split_list(s).map(parse_f64).collect::<Result<Vec<f64>, String>>()?;
    match parts.as_slice() {
        [a, b, c, d] => Ok(Quaternion::new(*a, *b, *c, *d)),
        _ => Err(format!("expected four components 'q0,q1,q2,q3', got '{s}'")),
    }
}

/// Comma-separated evaluation points.
#[derive(Clone, Debug, PartialEq)]
pub struct Points(pub Vec<f64>);

pub fn parse_points(s: &str) -> Result<Points, String> {
    let pts = split_list(s).map(parse_f64).collect::<Result<Vec<f64>, String>>()?;
    if pts.is_empty() {
        return Err("no evaluation points".into());
    }
    Ok(Points(pts))
}

/// `NAME:START:STOP:COUNT`.
pub fn parse_sweep(s: &str) -> Result<SweepSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, start, stop, count] = parts.as_slice() else {
        return Err(format!("expected NAME:START:STOP:COUNT, got '{s}'"));
    };
    let count = count.trim().parse::<usize>().map_err(|_| format!("'{count}' is not a count"))?;
    SweepSpec::new(SweepParam::parse(name)?, parse_f64(start)?, parse_f64(stop)?, count)
}
