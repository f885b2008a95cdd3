# 放射报告信息抽取、知识图谱增强与报告生成
