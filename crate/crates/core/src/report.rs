use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Outcome of one verification run. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub max_error: f64,
    pub tol: f64,
    pub seed: u64,
    pub witness: Option<String>,
}

impl CheckReport {
    /// Pass iff `max_error ≤ tol`. A NaN error fails.
    pub fn from_error(name: impl Into<String>, max_error: f64, tol: f64, seed: u64, witness: Option<String>) -> Self {
        let status = if max_error <= tol { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            max_error,
            tol,
            seed,
            witness,
        }
    }

    /// A run that could not be carried out. `max_error` is infinite, which
    /// serializes as `null`.
    pub fn errored(name: impl Into<String>, tol: f64, seed: u64, message: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Error,
            max_error: f64::INFINITY,
            tol,
            seed,
            witness: Some(message.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Running maximum of residuals that remembers where the worst one occurred.
#[derive(Clone, Debug, Default)]
pub struct Residual {
    pub max: f64,
    pub witness: Option<String>,
}

impl Residual {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `value`; NaN always wins so it cannot hide behind `max`.
    pub fn record(&mut self, value: f64, witness: impl FnOnce() -> String) {
        if self.max.is_nan() {
            return;
        }
        if value.is_nan() || value > self.max || (self.witness.is_none() && value >= self.max) {
            self.max = value;
            self.witness = Some(witness());
        }
    }

    pub fn merge(&mut self, other: Residual) {
        if let Some(w) = other.witness {
            self.record(other.max, || w);
        }
    }

    /// Report for this residual; the witness is attached only on failure.
    pub fn report(self, name: impl Into<String>, tol: f64, seed: u64) -> CheckReport {
        let mut r = CheckReport::from_error(name, self.max, tol, seed, None);
        if !r.passed() {
            r.witness = self.witness;
        }
        r
    }
}

pub fn to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn write_json(reports: &[CheckReport], path: &std::path::Path) -> std::io::Result<()> {
    let mut text = to_json(reports);
    text.push('\n');
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_and_key_order() {
        let r = CheckReport::from_error("cross_norm", 1.5e-16, 1e-9, 7, None);
        let json = serde_json::to_string(&[r]).unwrap();
        assert_eq!(
            json,
            r#"[{"name":"cross_norm","status":"pass","max_error":1.5e-16,"tol":1e-9,"seed":7,"witness":null}]"#
        );
    }

    #[test]
    fn failing_report_carries_witness() {
        let mut res = Residual::new();
        res.record(1e-3, || "basis pair (0, 1)".into());
        res.record(1e-5, || "other".into());
        let r = res.report("verify_hom", 1e-10, 0);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness.as_deref(), Some("basis pair (0, 1)"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""witness":"basis pair (0, 1)""#));
    }

    #[test]
    fn floats_round_trip() {
        let x = 0.1 + 0.2;
        let r = CheckReport::from_error("x", x, 1.0, 0, None);
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(v["max_error"].as_f64().unwrap(), x);
    }

    #[test]
    fn nan_and_error_reports() {
        let mut res = Residual::new();
        res.record(f64::NAN, || "nan".into());
        res.record(5.0, || "later".into());
        assert!(!res.clone().report("n", 1.0, 0).passed());
        assert_eq!(res.witness.as_deref(), Some("nan"));
        let e = CheckReport::errored("bad", 1e-9, 3, "boom");
        assert_eq!(e.status, Status::Error);
        assert!(serde_json::to_string(&e).unwrap().contains(r#""max_error":null"#));
    }
}
