//! Print the default scenario as TOML.

fn main() {
    print!("{}", climgov::SimulationConfig::default().to_toml_string().unwrap());
}
