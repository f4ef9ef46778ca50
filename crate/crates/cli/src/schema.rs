//! Small JSON Schema checker covering the subset the report schema uses:
//! `type`, `enum`, `required`, `properties`, `additionalProperties: false`,
//! `items`, `oneOf`, and `#/...` references.
//!
//! Reports are validated against the shipped schema before they are
//! written, so a drift between the Rust structs and the schema file fails
//! loudly instead of producing documents downstream tools reject.

use serde_json::Value;

/// Validate `instance` against `schema`. Returns every violation found,
/// each formatted as `path: message`.
pub fn validate(schema: &Value, instance: &Value) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    check(schema, schema, instance, "$", &mut errs);
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Option<&'a Value> {
    // "#/$defs/name" is a JSON pointer after the leading '#'.
    root.pointer(reference.strip_prefix('#')?)
}

fn check(root: &Value, schema: &Value, inst: &Value, path: &str, errs: &mut Vec<String>) {
    let Some(obj) = schema.as_object() else {
        return;
    };
    if let Some(Value::String(r)) = obj.get("$ref") {
        match resolve(root, r) {
            Some(target) => check(root, target, inst, path, errs),
            None => errs.push(format!("{path}: unresolvable $ref {r}")),
        }
        return;
    }
    if let Some(branches) = obj.get("oneOf").and_then(Value::as_array) {
        let mut passes = 0;
        for branch in branches {
            let mut branch_errs = Vec::new();
            check(root, branch, inst, path, &mut branch_errs);
            if branch_errs.is_empty() {
                passes += 1;
            }
        }
        if passes != 1 {
            errs.push(format!(
                "{path}: matched {passes} of {} oneOf branches",
                branches.len()
            ));
        }
    }
    if let Some(ty) = obj.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !names.iter().any(|n| type_matches(n, inst)) {
            errs.push(format!(
                "{path}: expected {}, got {}",
                names.join(" or "),
                kind(inst)
            ));
            return;
        }
    }
    if let Some(allowed) = obj.get("enum").and_then(Value::as_array) {
        if !allowed.contains(inst) {
            errs.push(format!("{path}: {inst} not in enum"));
        }
    }
    if let Some(map) = inst.as_object() {
        let props = obj.get("properties").and_then(Value::as_object);
        if let Some(required) = obj.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !map.contains_key(key) {
                    errs.push(format!("{path}: missing required `{key}`"));
                }
            }
        }
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(child) = map.get(key) {
                    check(root, sub, child, &format!("{path}.{key}"), errs);
                }
            }
        }
        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in map.keys() {
                if props.is_none_or(|p| !p.contains_key(key)) {
                    errs.push(format!("{path}: unexpected key `{key}`"));
                }
            }
        }
    }
    if let (Some(items), Some(elems)) = (obj.get("items"), inst.as_array()) {
        for (i, elem) in elems.iter().enumerate() {
            check(root, items, elem, &format!("{path}[{i}]"), errs);
        }
    }
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => {
            v.as_i64().is_some()
                || v.as_u64().is_some()
                || v.as_f64()
                    .is_some_and(|f| f.is_finite() && f.fract() == 0.0)
        }
        _ => false,
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}
