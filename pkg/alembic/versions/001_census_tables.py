"""Create census run and cell tables

Revision ID: 001_census_tables
Revises:
Create Date: 2026-10-18
"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa

# revision identifiers, used by Alembic.
revision: str = '001_census_tables'
down_revision: Union[str, Sequence[str], None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Create census_runs and census_cells."""
    op.create_table(
        'census_runs',
        sa.Column('id', sa.Integer(), autoincrement=True, nullable=False),
        sa.Column('g', sa.Integer(), nullable=False),
        sa.Column('marking_type', sa.String(length=32), nullable=False),
        sa.Column('modulus', sa.Integer(), nullable=True),
        sa.Column('form', sa.JSON(), nullable=True),
        sa.Column('code_version', sa.String(length=64), nullable=False),
        sa.Column('max_codim', sa.Integer(), nullable=False),
        sa.Column('complete', sa.Boolean(), nullable=False),
        sa.Column('created_at', sa.DateTime(), nullable=False),
        sa.Column('updated_at', sa.DateTime(), nullable=False),
        sa.PrimaryKeyConstraint('id')
    )
    op.create_table(
        'census_cells',
        sa.Column('id', sa.Integer(), autoincrement=True, nullable=False),
        sa.Column('run_id', sa.Integer(), nullable=False),
        sa.Column('key', sa.String(length=32), nullable=False),
        sa.Column('codim', sa.Integer(), nullable=False),
        sa.Column('aut_count', sa.Integer(), nullable=False),
        sa.Column('kind', sa.String(length=16), nullable=True),
        sa.Column('representative', sa.JSON(), nullable=True),
        sa.Column('cofaces', sa.JSON(), nullable=True),
        sa.Column('faces', sa.JSON(), nullable=True),
        sa.ForeignKeyConstraint(['run_id'], ['census_runs.id'], ondelete='CASCADE'),
        sa.PrimaryKeyConstraint('id'),
        sa.UniqueConstraint('run_id', 'key', name='uq_census_cell_run_key')
    )
    op.create_index('ix_census_cells_run_codim', 'census_cells', ['run_id', 'codim'], unique=False)


def downgrade() -> None:
    """Drop census tables."""
    op.drop_index('ix_census_cells_run_codim', table_name='census_cells')
    op.drop_table('census_cells')
    op.drop_table('census_runs')
