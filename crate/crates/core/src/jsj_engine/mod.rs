//! JSJ engine (under construction).
