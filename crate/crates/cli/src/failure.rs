use serde_json::{json, Value};

/// Anything that ends a run early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(nehari_ft::Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Library(e) if e.is_usage() => 2,
            Failure::Library(_) => 3,
            Failure::Io(_) => 1,
        }
    }

    /// Machine-readable record for standard error.
    pub fn record(&self) -> Value {
        let mut rec = match self {
            Failure::Usage(m) => json!({ "kind": "usage", "message": m }),
            Failure::Io(e) => json!({ "kind": "io", "message": e.to_string() }),
            Failure::Library(e) => {
                let mut rec = json!({ "kind": e.kind(), "message": e.to_string() });
                if let nehari_ft::Error::NoSolution {
                    branch,
                    omega,
                    omega_star,
                    omega_dstar,
                } = e
                {
                    rec["branch"] = json!(branch.to_string());
                    rec["omega"] = json!(omega);
                    rec["omega_star"] = json!(omega_star);
                    rec["omega_dstar"] = json!(omega_dstar);
                }
                rec
            }
        };
        rec["exit_code"] = json!(self.exit_code());
        rec
    }
}

impl From<nehari_ft::Error> for Failure {
    fn from(e: nehari_ft::Error) -> Self {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}
