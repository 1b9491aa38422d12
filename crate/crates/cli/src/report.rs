//! Verification report: one record per check, rendered as a table or JSON.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// "pass" | "fail" | "skipped"
    pub status: String,
    pub detail: serde_json::Value,
}

impl Check {
    pub fn value(name: &str, detail: serde_json::Value) -> Check {
        Check {
            name: name.to_string(),
            status: "pass".into(),
            detail,
        }
    }

    pub fn bool(name: &str, ok: bool) -> Check {
        Check {
            name: name.to_string(),
            status: if ok { "pass" } else { "fail" }.into(),
            detail: serde_json::json!({}),
        }
    }

    pub fn residual(name: &str, residual: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            status: if residual < tol { "pass" } else { "fail" }.into(),
            detail: serde_json::json!({ "residual": residual, "tol": tol }),
        }
    }

    pub fn fail(&mut self) {
        self.status = "fail".into();
    }

    pub fn skip(&mut self, reason: &str) {
        self.status = "skipped".into();
        self.detail["reason"] = serde_json::Value::String(reason.to_string());
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != "fail")
    }

    pub fn render(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("serializable"));
            return;
        }
        for c in &self.checks {
            let detail = if c.detail.as_object().is_some_and(|o| o.is_empty()) {
                String::new()
            } else {
                format!("  {}", c.detail)
            };
            println!("{:<40} {:>8}{detail}", c.name, c.status);
        }
        let failed = self.checks.iter().filter(|c| c.status == "fail").count();
        let skipped = self.checks.iter().filter(|c| c.status == "skipped").count();
        println!(
            "{} checks, {} failed, {} skipped",
            self.checks.len(),
            failed,
            skipped
        );
    }
}
