"""
合冲模计算工具
对 grade 2 理想 ⟨a₁, …, a_m⟩ = ⟨p, q⟩ 计算 Syz(a₁, …, a_m) 的一组基，并给出可校验的证书

模块：
- algebra：有理系数多项式、Gröbner 基、多项式矩阵
- quillen_suslin：单模矩阵补全
- syzygy：三种构造基的方法与 Hilbert–Burch 校验
- bounds：次数上界公式
- cli：实例文件与命令行
"""
