//! Minimal JSON-Schema checker covering the subset the published schemas use:
//! type, required, properties, items, enum, minimum.

use serde_json::Value;

pub fn validate(value: &Value, schema: &Value) -> Result<(), String> {
    validate_at(value, schema, "$")
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "boolean" => value.is_boolean(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn validate_at(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(value, t),
            Value::Array(ts) => ts
                .iter()
                .filter_map(|t| t.as_str())
                .any(|t| type_matches(value, t)),
            _ => true,
        };
        if !ok {
            return Err(format!("{path}: expected type {ty}, got {value}"));
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(|e| e.as_array()) {
        if !allowed.contains(value) {
            return Err(format!("{path}: value {value} not in enum"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(|m| m.as_f64()) {
        if let Some(x) = value.as_f64() {
            if x < min {
                return Err(format!("{path}: {x} below minimum {min}"));
            }
        }
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        for key in required.iter().filter_map(|k| k.as_str()) {
            if value.get(key).is_none() {
                return Err(format!("{path}: missing required field '{key}'"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        if let Some(obj) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate_at(v, sub, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_at(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn accepts_valid_and_rejects_invalid() {
        let schema = json!({
            "type": "object",
            "required": ["command"],
            "properties": {
                "command": {"type": "string", "enum": ["gamma", "certify"]},
                "samples": {"type": "integer", "minimum": 2}
            }
        });
        assert!(validate(&json!({"command": "gamma", "samples": 10}), &schema).is_ok());
        assert!(validate(&json!({"samples": 10}), &schema).is_err());
        assert!(validate(&json!({"command": "nope"}), &schema).is_err());
        assert!(validate(&json!({"command": "gamma", "samples": 1}), &schema).is_err());
        assert!(validate(&json!({"command": "gamma", "samples": 2.5}), &schema).is_err());
    }
}
