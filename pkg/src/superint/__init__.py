"""so(2,1) solutions of the Smorodinsky-Winternitz potentials."""
