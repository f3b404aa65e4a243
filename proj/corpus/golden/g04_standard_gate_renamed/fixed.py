qc = QuantumCircuit(2)
qc.tdg(1)
...
