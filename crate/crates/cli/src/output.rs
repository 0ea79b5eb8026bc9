use serde_json::{Map, Value};

/// `path = value` lines, one per leaf, in key order.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push_str(&format!("{path} = {s}\n")),
        _ => out.push_str(&format!("{path} = {v}\n")),
    }
}

/// Fixture file name built from the command and its job echo.
pub fn fixture_name(command: &str, job: &Map<String, Value>) -> String {
    let mut name = command.replace(' ', "-");
    for (k, v) in job {
        if v.is_null() || *v == Value::Bool(false) {
            continue;
        }
        let v = match v {
            Value::String(s) => s.clone(),
            Value::Array(a) => a.iter().map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string)).collect::<Vec<_>>().join(","),
            x => x.to_string(),
        };
        name.push_str(&format!("_{k}={v}"));
    }
    let clean: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || "._=,-".contains(c) { c } else { '~' }).collect();
    format!("{clean}.json")
}
