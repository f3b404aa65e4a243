qc = QuantumCircuit(4)
sub = QuantumCircuit(3)
g1 = sub.to_instruction()
g2 = Gate('second', 2, [])
qc.append(g1, [0, 1, 2])
qc.append(g2, [0, 1, 2, 3])
