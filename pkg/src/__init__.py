"""hydrolimit - primitive equations vs scaled Navier-Stokes verification suite."""
