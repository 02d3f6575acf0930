//! Cross-module checks of the scattering lab.

mod amplitudes;
mod oracle;
mod packets;
